#pragma once

// Symbolic rank-one quantized enveloping algebra over exact rational
// functions of q, in the integral form generated by Ebar = (q-q^-1)E,
// Fbar = (q-q^-1)F and the lattice elements L_mu. Elements are kept in
// PBW normal form Ebar^k L_mu Fbar^m. Weights mu are integers in the
// fundamental-weight basis (mu = n omega); the root alpha is 2 omega.

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qholo/arith.hpp"

namespace qholo {

struct PbwTerm {
  long e = 0;   // power of Ebar
  long mu = 0;  // L_{mu . omega}
  long f = 0;   // power of Fbar
  auto operator<=>(const PbwTerm&) const = default;
};

class AlgElem {
 public:
  AlgElem() = default;

  static AlgElem zero() { return {}; }
  static AlgElem one() { return monomial({0, 0, 0}, RatFuncQ(1)); }
  static AlgElem Eb() { return monomial({1, 0, 0}, RatFuncQ(1)); }
  static AlgElem Fb() { return monomial({0, 0, 1}, RatFuncQ(1)); }
  static AlgElem L(long n) { return monomial({0, n, 0}, RatFuncQ(1)); }
  static AlgElem monomial(PbwTerm t, RatFuncQ c);

  const std::map<PbwTerm, RatFuncQ>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const AlgElem&) const = default;

  AlgElem operator-() const;
  AlgElem operator+(const AlgElem& o) const;
  AlgElem operator-(const AlgElem& o) const;
  AlgElem operator*(const RatFuncQ& c) const;
  AlgElem& operator+=(const AlgElem& o) { return *this = *this + o; }

  std::string str() const;

 private:
  void add_term(const PbwTerm& t, const RatFuncQ& c);
  std::map<PbwTerm, RatFuncQ> terms_;  // no zero coefficients stored
  friend AlgElem multiply(const AlgElem&, const AlgElem&);
};

// PBW normal form of the product; straightening uses
// Fbar Ebar = Ebar Fbar - (q - q^-1)(L_alpha - L_alpha^-1).
AlgElem multiply(const AlgElem& a, const AlgElem& b);
AlgElem power(const AlgElem& a, long n);
AlgElem commutator(const AlgElem& a, const AlgElem& b);

class TensorElem {
 public:
  using Key = std::pair<PbwTerm, PbwTerm>;
  TensorElem() = default;
  static TensorElem tensor(const AlgElem& a, const AlgElem& b);

  const std::map<Key, RatFuncQ>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const TensorElem&) const = default;

  TensorElem operator-() const;
  TensorElem operator+(const TensorElem& o) const;
  TensorElem operator-(const TensorElem& o) const;

  std::string str() const;

  void add_term(const Key& t, const RatFuncQ& c);

 private:
  std::map<Key, RatFuncQ> terms_;
};

TensorElem multiply(const TensorElem& a, const TensorElem& b);
TensorElem power(const TensorElem& a, long n);

// coproduct: Delta(Ebar) = Ebar (x) 1 + L_alpha (x) Ebar,
//            Delta(Fbar) = Fbar (x) L_alpha^-1 + 1 (x) Fbar,
//            Delta(L_mu) = L_mu (x) L_mu
TensorElem coproduct(const AlgElem& a);

RatFuncQ counit(const AlgElem& a);

// antipode: S(L_mu) = L_-mu, S(Ebar) = -L_alpha^-1 Ebar, S(Fbar) = -Fbar L_alpha,
// extended anti-multiplicatively
AlgElem antipode(const AlgElem& a);

// multiplication map applied to a tensor: sum c * x * y
AlgElem contract_product(const TensorElem& t);
// (S (x) id) and similar component maps
TensorElem map_first(const TensorElem& t, AlgElem (*f)(const AlgElem&));

enum class BraidDir { fwd, inv };

// quantum Weyl group generator: T(Ebar) = -Fbar L_alpha, T(Fbar) = -L_alpha^-1 Ebar,
// T(L_mu) = L_{s(mu)}; the inverse is the inverse automorphism.
AlgElem braid_T(const AlgElem& a, BraidDir dir = BraidDir::fwd);

// Casimir element Fbar Ebar + q L_alpha + q^-1 L_alpha^-1 (central).
AlgElem casimir();

// true when every coefficient of the normal form vanishes at q = eps
bool vanishes_at_root(const AlgElem& a, long ell);
bool vanishes_at_root(const TensorElem& a, long ell);

struct CentralityReport {
  struct Item {
    std::string name;
    bool exact_zero;
  };
  long ell = 0;
  std::vector<Item> items;
  bool all_pass() const;
};

// Exact verification over Q(eps) that Ebar^ell, Fbar^ell, L_mu^ell are
// central against the generators and that Delta(Ebar^ell) collapses to
// Ebar^ell (x) 1 + L_alpha^ell (x) Ebar^ell.
CentralityReport central_power_check(long ell);

}  // namespace qholo
