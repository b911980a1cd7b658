#pragma once

// Cyclic irreducible ell-dimensional representations at a primitive odd
// ell-th root of unity, with prescribed central character, dual
// representations, intertwiner solving, and Casimir evaluation.
//
// Characters are kept in the coordinates matched to the Hopf embedding
// of the central subalgebra: L_omega^ell = k, Ebar^ell = e, Fbar^ell = f
// with e = k * e_tri and f = f_tri / k in terms of the raw triangular
// entries of a GStarPoint.

#include <optional>

#include "qholo/gstar.hpp"
#include "qholo/linalg.hpp"

namespace qholo {

struct nongeneric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Cx root_of_unity(long ell, long power = 1);
// principal ell-th root (branch cut on the negative axis)
Cx principal_root(Cx z, long ell);

struct CentralChar {
  long ell = 3;
  Cx k{1.0, 0.0};
  Cx e{0.0, 0.0};
  Cx f{0.0, 0.0};
};

// character of the point, in the Hopf-matched coordinates
CentralChar char_of(const GStarPoint& p, long ell);
// the point with this character (branch = sign carried by k)
GStarPoint point_of(const CentralChar& chi);
// character of the group inverse in the dual group (the antipode image):
// k -> 1/k, e -> -e/k^2, f -> -k^2 f
CentralChar dual_char(const CentralChar& chi);

struct LiftData {
  Cx mu;    // mu^ell = k; spectrum of L is mu eps^-n
  Cx beta;  // beta^ell = f; F v_n = beta v_{n+1 mod ell}
  Cx a0;    // E v_n = a_n v_{n-1 mod ell}, a_0 at n = 0
};

// selection of the lift by indices into deterministic root orderings
struct LiftChoice {
  long mu_index = 0;    // mu = principal_root(k) * eps^mu_index
  long beta_index = 0;  // beta = principal_root(f) * eps^beta_index
  long a0_index = 0;    // index into the sorted roots of the e-matching polynomial
};

class CyclicRep {
 public:
  long ell = 3;
  CentralChar chi;
  LiftData lift;
  MatX E, F, L;  // matrices for Ebar, Fbar, L_omega

  // Casimir scalar: beta a0 + eps mu^2 + eps^-1 mu^-2
  Cx casimir_scalar() const;
  // worst relative residual over the defining relations and power identities
  double relation_residual() const;
  Mat2 color(int branch = +1) const { return to_group(point(branch)); }
  GStarPoint point(int branch = +1) const;
};

// Cyclic construction: L diagonal mu eps^-n, F the constant cyclic shift,
// E the shifted diagonal solving the commutation recurrence with the
// cyclic product matched to the e-character. Requires |f| bounded away
// from zero (throws nongeneric_error otherwise).
CyclicRep build_rep(const CentralChar& chi, const LiftChoice& lift = {});
// same construction with mu given directly and a0 fixed by the Casimir
// scalar; used when a particular central character of the full center
// must be matched
CyclicRep build_rep_with_casimir(const CentralChar& chi, Cx mu, Cx omega);

// the ell roots of the e-matching polynomial for a0, sorted by (Re, Im)
std::vector<Cx> a0_candidates(const CentralChar& chi, Cx mu, Cx beta);

// dual representation: a -> pi(S(a))^T; returns matrices together with
// the dual character. The lift stores mu* = 1/mu; beta/a0 are not
// meaningful for the transposed form and are set to zero.
CyclicRep dual_rep(const CyclicRep& rep);

struct IntertwinerResult {
  MatX t;          // normalized so the largest-modulus entry is 1; empty if nullity 0
  long nullity = 0;
};

// Solves T pi_B(a) = pi_A(a) T for a in {Ebar, Fbar, L}; nullity 1 means
// the representations are equivalent and t conjugates B into A.
IntertwinerResult intertwiner(const CyclicRep& a, const CyclicRep& b, double rel_tol = 1e-8);

// dimension of the commutant of {E, F, L}; 1 for irreducible
long commutant_dimension(const CyclicRep& rep, double rel_tol = 1e-8);

struct CasimirCheck {
  Cx scalar;
  double off_scalar_residual;
};
CasimirCheck casimir_check(const CyclicRep& rep);

// rescales t to unit determinant, then fixes the remaining ell-th root
// of unity so the argument of the largest-modulus entry lies in
// (-pi/ell, pi/ell]; deterministic and stable under small deformations
MatX fix_gauge(MatX t, long ell);

}  // namespace qholo
