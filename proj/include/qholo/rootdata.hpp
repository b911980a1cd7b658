#pragma once

// Cartan data, Weyl group combinatorics, reduced decompositions of the
// longest element, and convex orderings of positive roots, for rank <= 4.

#include <string>
#include <vector>

namespace qholo {

enum class Lattice { Q, P };

// Weight in the fundamental-weight basis, or root in the simple-root
// basis; both are plain integer coordinate vectors.
using IntVec = std::vector<long>;

struct CartanData {
  long rank = 0;
  std::vector<std::vector<long>> a;  // Cartan matrix, a[i][j] = <alpha_i, alpha_j^vee>
  std::vector<long> d;               // minimal positive symmetrizers, d_j a_ij symmetric
  Lattice lattice = Lattice::P;
  std::vector<std::vector<long>> m;  // braid exponents m_ij in {2,3,4,6}

  // pairing (alpha_i, mu) for mu in the fundamental-weight basis;
  // (alpha_i, omega_j) = d_i delta_ij
  long alpha_pair(long i, const IntVec& mu) const { return d[static_cast<size_t>(i)] * mu[static_cast<size_t>(i)]; }
  // root in simple-root coords -> fundamental-weight coords (columns of a)
  IntVec root_to_weight(const IntVec& root) const;
  // symmetric form (x, y) for roots in simple-root coords
  long root_form(const IntVec& x, const IntVec& y) const;
  bool in_root_lattice(const IntVec& weight_coords) const;
};

// Builds validated Cartan data from a series name ("A","B","C","D","G")
// and rank, or from an explicit matrix. Throws std::domain_error on
// invalid input.
CartanData build_cartan(const std::string& series, long rank, Lattice lattice = Lattice::P);
CartanData build_cartan(const std::vector<std::vector<long>>& matrix, Lattice lattice = Lattice::P);

// s_i(mu) in fundamental-weight coordinates
IntVec simple_reflect(const CartanData& cd, const IntVec& mu, long i);

// All positive roots in simple-root coordinates (orbit closure).
std::vector<IntVec> positive_roots(const CartanData& cd);

struct ReducedWord {
  std::vector<long> letters;  // simple-reflection indices, 0-based
};

// Lexicographically least reduced word for the longest Weyl element.
// Supported for rank <= 4.
ReducedWord longest_word(const CartanData& cd);

// Checks that the word's reflection product is the longest element.
bool is_longest_word(const CartanData& cd, const ReducedWord& w);

// beta_a = s_{j_1} ... s_{j_{a-1}} (alpha_{j_a}); returns positive roots in
// simple-root coordinates. Throws std::domain_error if the word is not
// reduced (detected by a repeated or non-positive root).
std::vector<IntVec> convex_order(const CartanData& cd, const ReducedWord& w);

}  // namespace qholo
