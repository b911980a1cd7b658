#pragma once

// Holonomy crossing operators for pairs of cyclic representations: the
// intertwining contract, its ell-dimensional solution space, and the
// braid-distinguished element selected by an auxiliary Yang-Baxter
// instance. Also the scalar dilogarithm factor, the Cartan projector
// factor, the d-operator at dual color pairs, and diagnostic checks.

#include <functional>
#include <optional>

#include "qholo/cyclicrep.hpp"

namespace qholo {

struct crossing_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// scalar function f(u) = prod_{m=0}^{l-1} (1 - eps^m u)^{-m/l} with
// principal branches; throws crossing_error when an argument lands
// within cut_margin of the branch cut.
struct DilogSpec {
  long ell;
  double cut_margin = 1e-6;
  Cx operator()(Cx u) const;
};

// regular-part scalar profile sum_b u^b eps^{b(b-1)/2} / ([b]! (eps-eps^-1)^b)
Cx qexp_profile(Cx u, long ell);

// spectral calculus of fn on M with M^ell = c Id (c != 0): Lagrange
// projectors at the ell roots of c
MatX spectral_apply(const MatX& m, Cx c, long ell, const std::function<Cx(Cx)>& fn);

// (pi_x (x) pi_y)(regular dilog factor): f(Ebar (x) Fbar) by spectral
// calculus; branch policy per DilogSpec
MatX rn_factor(const CyclicRep& rx, const CyclicRep& ry, double cut_margin = 1e-6);

// Cartan projector sum Sum eps^{(lambda,mu)} P_lambda (x) P_mu with the
// weight labels anchored at the lift roots; label_shift shifts the
// anchor of the first factor (a recorded gauge)
MatX rc_factor(const CyclicRep& rx, const CyclicRep& ry, long label_shift = 0);

// images of the coproduct of the generators: Delta(L), Delta(Ebar),
// Delta(Fbar) evaluated in a (x) b
MatX coproduct_image(const CyclicRep& a, const CyclicRep& b, int which);

struct CrossingOp {
  long ell = 3;
  CyclicRep in1, in2;    // representations at the input colors (x, y)
  CyclicRep out1, out2;  // canonical representations at (x_L, x_R)
  Mat2 x, y, xl, xr;     // the colors
  MatX rhat;             // braided operator, largest entry normalized to 1
  Cx gauge;              // scalar removed by the normalization
  double contract_residual = 0;
  double condition = 0;  // ratio of extreme singular values of rhat
  double selection_residual = 0;  // defect of the braid-distinguished solve
};

// canonical representation at a group color: principal gauss at the given
// branch, default lifts
CyclicRep rep_at(const Mat2& color, long ell, int branch = +1);

// Output data of the braiding at the color level, with the branch pair
// fixed by conservation of the product of k-characters.
struct BraidedChars {
  CentralChar left, right;  // characters at x_L, x_R
  int branch_left, branch_right;
};
BraidedChars braided_chars(const CyclicRep& rx, const CyclicRep& ry, const Mat2& x, const Mat2& y);

// basis of the intertwining contract
//   R (pi_in1 (x) pi_in2)(Delta a) = (pi_out1 (x) pi_out2)(Delta a) R
std::vector<MatX> solve_crossing(const CyclicRep& in1, const CyclicRep& in2,
                                 const CyclicRep& out1, const CyclicRep& out2,
                                 double rel_tol = 1e-8);

struct BuildOptions {
  int gn_max_iter = 80;
  double accept_tol = 1e-9;  // acceptance on the profile-solve defect
};

// The braid-distinguished crossing operator at input representations
// rx @ x, ry @ y: the unique contract-space element of the product form
// (Cartan projector factor) x (polynomial profile in Fbar (x) Ebar),
// corrected onto the canonical output representations. The profile is
// solved so that the conjugated coproducts split into exact output
// representations. Throws crossing_error when the colors are not generic
// enough to complete the construction.
CrossingOp build_crossing(const CyclicRep& rx, const CyclicRep& ry, const Mat2& x, const Mat2& y,
                          const BuildOptions& opts = {});

// inverse crossing: acts from (x, y) to the inverse-braided colors; built
// as the inverse of the forward crossing at those colors with prescribed
// output branches matching (rx, ry)
CrossingOp build_inverse_crossing(const CyclicRep& rx, const CyclicRep& ry, const Mat2& x,
                                  const Mat2& y, const BuildOptions& opts = {});

struct YbeResult {
  double residual;   // min over c of |LHS - c RHS| / |LHS|
  Cx fitted_scalar;
  int accepted;      // 1 if all six crossings were constructible
  std::string reject_reason;
};

// Composes both sides of the holonomy Yang-Baxter equation on a triple
// and reports the projective residual.
YbeResult ybe_residual(const Mat2& x, const Mat2& y, const Mat2& z, long ell,
                       const BuildOptions& opts = {});

struct DmatResult {
  MatX d;
  Cx c_v;                  // proportionality scalar
  double prop_residual;    // | d - c_v pi(L_rho^s) | relative
  int sign;                // selected s in {+1, -1}
  double s2_residual;      // conjugation-implements-S^2 residual
};

// d-operator from the partial trace of the crossing at colors
// (x, i(x)^-1); validated against proportionality to pi(L_rho^s).
DmatResult dmat(const CyclicRep& rep, const Mat2& x, const BuildOptions& opts = {});

// the partner color i(x)^-1 (inverse of the dual-group inversion image)
Mat2 dual_partner_color(const Mat2& x, int branch = +1);

struct CrossingSymmetryReport {
  int variant = -1;        // index of the passing variant, -1 if none
  double residual = 1e18;
  bool skipped = false;
  std::string reason;
};

// runs the finitely many transpose/inverse parenthesization variants of
// the crossing-symmetry identities and reports which one holds
CrossingSymmetryReport crossing_symmetry_check(const Mat2& x, const Mat2& y, long ell,
                                               const BuildOptions& opts = {});

}  // namespace qholo
