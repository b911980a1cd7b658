#pragma once

// The dual Poisson-Lie group of SL2: triangular factorization with a
// 2-fold branched Gauss decomposition, the braiding maps on group-valued
// colors, the dressing action with branch continuity, and the symbolic
// Poisson bracket on the coordinate algebra.

#include <map>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

#include "qholo/linalg.hpp"

namespace qholo {

using Mat2 = Eigen::Matrix2cd;

struct decomposition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point of the 2-fold cover: b_plus = [[k, e], [0, 1/k]],
// b_minus = [[1/k, 0], [f, k]]. The branch tag records the sign of k
// against the principal square root of the underlying group element.
struct GStarPoint {
  Cx k{1.0, 0.0};
  Cx e{0.0, 0.0};
  Cx f{0.0, 0.0};
  int branch = +1;

  Mat2 b_plus() const;
  Mat2 b_minus() const;
  GStarPoint opposite() const { return {-k, -e, -f, -branch}; }
};

// b_plus * b_minus^-1 = [[k^2 - ef, e/k], [-f/k, 1/k^2]]
Mat2 to_group(const GStarPoint& p);

// Triangular factorization of g (requires g22 != 0 and det g = 1 within
// tol): k = branch * g22^{-1/2} (principal root), e = g12 k, f = -g21 k.
GStarPoint gauss(const Mat2& g, int branch = +1, double det_tol = 1e-9);

bool gauss_decomposable(const Mat2& g, double tol = 1e-9);

// Left output color of the braiding: x_minus y x_minus^-1.
Mat2 braid_left(const Mat2& x, const Mat2& y);
// Right output color: xl_plus^-1 x xl_plus with xl = braid_left(x, y).
Mat2 braid_right(const Mat2& x, const Mat2& y);

struct ColorPair {
  Mat2 left, right;
};
// (x, y) -> (x_L, x_R)
ColorPair braiding_map(const Mat2& x, const Mat2& y);
// closed-form inverse of the braiding map
ColorPair inverse_braiding_map(const Mat2& xl, const Mat2& xr);

// Max entrywise discrepancy of the two braid-relation composition orders
// on a triple. Throws decomposition_error when an intermediate color is
// not decomposable.
double braid_check(const Mat2& x, const Mat2& y, const Mat2& z);

// Dressing action: the point over g * to_group(x) * g^-1 with the branch
// chosen by continuity along the straight-line path from the identity
// to g. Throws decomposition_error when the path cannot be continued.
GStarPoint dress(const Mat2& g, const GStarPoint& x, int max_steps = 4096);

// ---------------------------------------------------------------------------
// Symbolic coordinate algebra: polynomials in k^{+-1}, e, f with rational
// coefficients, with the Poisson bracket
//   {k, e} = k e,  {k, f} = -k f,  {e, f} = k^2 - k^-2,  {k, k} = 0.

struct PoissonMono {
  long dk = 0;  // power of k (any sign)
  long de = 0;  // power of e, >= 0
  long df = 0;  // power of f, >= 0
  auto operator<=>(const PoissonMono&) const = default;
};

class PoissonPoly {
 public:
  PoissonPoly() = default;
  static PoissonPoly k(long power = 1) { return monomial({power, 0, 0}, 1); }
  static PoissonPoly e() { return monomial({0, 1, 0}, 1); }
  static PoissonPoly f() { return monomial({0, 0, 1}, 1); }
  static PoissonPoly constant(const mpq_class& c) { return monomial({0, 0, 0}, c); }
  static PoissonPoly monomial(PoissonMono m, const mpq_class& c);

  const std::map<PoissonMono, mpq_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const PoissonPoly&) const = default;

  PoissonPoly operator-() const;
  PoissonPoly operator+(const PoissonPoly& o) const;
  PoissonPoly operator-(const PoissonPoly& o) const;
  PoissonPoly operator*(const PoissonPoly& o) const;

  std::string str() const;

 private:
  void add_term(const PoissonMono& m, const mpq_class& c);
  std::map<PoissonMono, mpq_class> terms_;
};

// Leibniz extension of the generator brackets.
PoissonPoly pbracket(const PoissonPoly& a, const PoissonPoly& b);

// Classical braid automorphism: tau(k) = 1/k, tau(e) = -f k^-2,
// tau(f) = -e k^2, extended multiplicatively.
PoissonPoly classical_tau(const PoissonPoly& p);

}  // namespace qholo
