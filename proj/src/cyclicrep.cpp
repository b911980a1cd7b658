#include "qholo/cyclicrep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qholo {

Cx root_of_unity(long ell, long power) {
  double th = 2.0 * std::numbers::pi * static_cast<double>(power) / static_cast<double>(ell);
  return {std::cos(th), std::sin(th)};
}

Cx principal_root(Cx z, long ell) {
  if (z == Cx(0)) return 0;
  return std::exp(std::log(z) / static_cast<double>(ell));
}

CentralChar char_of(const GStarPoint& p, long ell) {
  // The e/f characters are normalized so the grouplike factors in the
  // coproducts of Ebar^ell, Fbar^ell match the group law, and so that
  // the degree-ell relation of the Casimir evaluates to the trace of the
  // underlying group element (which makes the character assignment
  // consistent with the dressing action): P_ell(Omega) = e f + k^2 + k^-2
  // = tr to_group(p).
  return {ell, p.k, p.k * p.e, -p.f / p.k};
}

GStarPoint point_of(const CentralChar& chi) {
  return {chi.k, chi.e / chi.k, -chi.f * chi.k, +1};
}

CentralChar dual_char(const CentralChar& chi) {
  return {chi.ell, Cx(1) / chi.k, -chi.e / (chi.k * chi.k), -chi.f * chi.k * chi.k};
}

GStarPoint CyclicRep::point(int branch) const {
  GStarPoint p = point_of(chi);
  p.branch = branch;
  return p;
}

Cx CyclicRep::casimir_scalar() const {
  Cx eps = root_of_unity(ell);
  Cx m2 = lift.mu * lift.mu;
  return lift.beta * lift.a0 + eps * m2 + Cx(1) / (eps * m2);
}

double CyclicRep::relation_residual() const {
  Cx eps = root_of_unity(ell);
  double r = 0;
  r = std::max(r, (L * E - eps * E * L).norm() / std::max(1.0, L.norm() * E.norm()));
  r = std::max(r, (L * F - F * L / eps).norm() / std::max(1.0, L.norm() * F.norm()));
  MatX la = L * L;
  MatX rel = E * F - F * E - (eps - Cx(1) / eps) * (la - la.inverse());
  double rel_scale = std::max({E.norm() * F.norm(), la.norm(), 1.0});
  r = std::max(r, rel.norm() / rel_scale);
  MatX id = MatX::Identity(ell, ell);
  // power identities, relative to the largest intermediate power (the
  // natural scale of the accumulated rounding error)
  auto power_res = [&](const MatX& m, Cx target) {
    MatX p = id;
    double peak = 1.0;
    for (long i = 0; i < ell; ++i) {
      p = p * m;
      peak = std::max(peak, p.cwiseAbs().maxCoeff());
    }
    return (p - target * id).cwiseAbs().maxCoeff() / std::max({peak, std::abs(target)});
  };
  r = std::max(r, power_res(E, chi.e));
  r = std::max(r, power_res(F, chi.f));
  r = std::max(r, power_res(L, chi.k));
  return r;
}

namespace {

// a_n = a0 + (1/beta)(mu^2 eps (1 - eps^-2n) + mu^-2 eps^-1 (1 - eps^2n))
std::vector<Cx> ladder_offsets(long ell, Cx mu, Cx beta) {
  Cx eps = root_of_unity(ell);
  Cx m2 = mu * mu, im2 = Cx(1) / m2;
  std::vector<Cx> g(static_cast<size_t>(ell));
  for (long n = 0; n < ell; ++n) {
    Cx en = std::pow(eps, static_cast<double>(n));
    Cx e2n = en * en;
    g[static_cast<size_t>(n)] =
        (m2 * eps * (Cx(1) - Cx(1) / e2n) + im2 / eps * (Cx(1) - e2n)) / beta;
  }
  return g;
}

CyclicRep assemble(const CentralChar& chi, Cx mu, Cx beta, Cx a0) {
  long ell = chi.ell;
  Cx eps = root_of_unity(ell);
  CyclicRep rep;
  rep.ell = ell;
  rep.chi = chi;
  rep.lift = {mu, beta, a0};
  rep.L = MatX::Zero(ell, ell);
  rep.F = MatX::Zero(ell, ell);
  rep.E = MatX::Zero(ell, ell);
  std::vector<Cx> g = ladder_offsets(ell, mu, beta);
  for (long n = 0; n < ell; ++n) {
    rep.L(n, n) = mu / std::pow(eps, static_cast<double>(n));
    rep.F((n + 1) % ell, n) = beta;
    rep.E(((n - 1) % ell + ell) % ell, n) = a0 + g[static_cast<size_t>(n)];
  }
  return rep;
}

}  // namespace

std::vector<Cx> a0_candidates(const CentralChar& chi, Cx mu, Cx beta) {
  long ell = chi.ell;
  std::vector<Cx> g = ladder_offsets(ell, mu, beta);
  // expand prod_n (x + g_n) - e and take its roots
  std::vector<Cx> poly = {Cx(1)};  // descending-degree coefficients
  for (long n = 0; n < ell; ++n) {
    std::vector<Cx> next(poly.size() + 1, Cx(0));
    for (size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] += poly[i] * g[static_cast<size_t>(n)];
    }
    poly = std::move(next);
  }
  poly.back() -= chi.e;
  MatX companion = MatX::Zero(ell, ell);
  for (long i = 0; i < ell; ++i) companion(0, i) = -poly[static_cast<size_t>(i + 1)];
  for (long i = 1; i < ell; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<MatX> es(companion);
  std::vector<Cx> roots(es.eigenvalues().data(), es.eigenvalues().data() + ell);
  std::sort(roots.begin(), roots.end(), [](Cx a, Cx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

CyclicRep build_rep(const CentralChar& chi, const LiftChoice& lift) {
  long ell = chi.ell;
  if (ell < 3 || ell % 2 == 0) throw std::domain_error("build_rep: ell must be odd >= 3");
  if (std::abs(chi.k) < 1e-12) throw nongeneric_error("build_rep: k vanishes");
  if (std::abs(chi.f) < 1e-12)
    throw nongeneric_error("build_rep: f-character vanishes (cyclic form unavailable)");
  Cx mu = principal_root(chi.k, ell) * root_of_unity(ell, lift.mu_index);
  Cx beta = principal_root(chi.f, ell) * root_of_unity(ell, lift.beta_index);
  auto roots = a0_candidates(chi, mu, beta);
  Cx a0 = roots[static_cast<size_t>(((lift.a0_index % ell) + ell) % ell)];
  CyclicRep rep = assemble(chi, mu, beta, a0);
  double res = rep.relation_residual();
  if (res > 1e-10)
    throw nongeneric_error("build_rep: relation residual " + std::to_string(res));
  return rep;
}

CyclicRep build_rep_with_casimir(const CentralChar& chi, Cx mu, Cx omega) {
  long ell = chi.ell;
  if (std::abs(chi.f) < 1e-12)
    throw nongeneric_error("build_rep_with_casimir: f-character vanishes");
  Cx eps = root_of_unity(ell);
  Cx beta = principal_root(chi.f, ell);
  Cx a0 = (omega - eps * mu * mu - Cx(1) / (eps * mu * mu)) / beta;
  CyclicRep rep = assemble(chi, mu, beta, a0);
  // the prescribed Casimir must be consistent with the e-character
  MatX ep = MatX::Identity(ell, ell);
  for (long i = 0; i < ell; ++i) ep = ep * rep.E;
  double mismatch = (ep - chi.e * MatX::Identity(ell, ell)).norm() /
                    std::max(1.0, std::abs(chi.e));
  if (mismatch > 1e-7)
    throw nongeneric_error("build_rep_with_casimir: casimir inconsistent with e-character (" +
                           std::to_string(mismatch) + ")");
  return rep;
}

CyclicRep dual_rep(const CyclicRep& rep) {
  CyclicRep out;
  out.ell = rep.ell;
  out.chi = dual_char(rep.chi);
  MatX la = rep.L * rep.L;
  out.E = -(la.inverse() * rep.E).transpose();
  out.F = -(rep.F * la).transpose();
  out.L = rep.L.inverse().transpose();
  out.lift = {Cx(1) / rep.lift.mu, 0.0, 0.0};
  return out;
}

IntertwinerResult intertwiner(const CyclicRep& a, const CyclicRep& b, double rel_tol) {
  long n = a.ell;
  if (b.ell != n) throw std::domain_error("intertwiner: dimension mismatch");
  MatX id = MatX::Identity(n, n);
  // column-major vec: vec(A T) = (I (x) A) vec T, vec(T B) = (B^T (x) I) vec T,
  // so A T - T B = 0 reads (I (x) A - B^T (x) I) vec T = 0
  auto block = [&](const MatX& A, const MatX& B) -> MatX {
    return kron(id, A) - kron(B.transpose(), id);
  };
  MatX sys(3 * n * n, n * n);
  sys.block(0, 0, n * n, n * n) = block(a.E, b.E);
  sys.block(n * n, 0, n * n, n * n) = block(a.F, b.F);
  sys.block(2 * n * n, 0, n * n, n * n) = block(a.L, b.L);
  auto basis = nullspace(sys, rel_tol);
  IntertwinerResult res;
  res.nullity = static_cast<long>(basis.size());
  if (!basis.empty()) {
    // unvec: the kron convention above pairs with column-stacked vec(T),
    // i.e. vec index = j * n + i for T_{ij}... fix by reshaping as
    // column-major which matches Eigen's default Map.
    MatX t = Eigen::Map<const MatX>(basis[0].data(), n, n);
    normalize_largest(t);
    res.t = t;
  }
  return res;
}

long commutant_dimension(const CyclicRep& rep, double rel_tol) {
  return intertwiner(rep, rep, rel_tol).nullity;
}

CasimirCheck casimir_check(const CyclicRep& rep) {
  Cx eps = root_of_unity(rep.ell);
  MatX la = rep.L * rep.L;
  MatX om = rep.F * rep.E + eps * la + la.inverse() / eps;
  Cx scalar = om.trace() / static_cast<double>(rep.ell);
  MatX off = om - scalar * MatX::Identity(rep.ell, rep.ell);
  return {scalar, off.norm() / std::max(1.0, std::abs(scalar))};
}

MatX fix_gauge(MatX t, long ell) {
  Cx det = t.determinant();
  if (std::abs(det) < 1e-300) return t;
  t /= principal_root(det, ell);
  Eigen::Index r = 0, c = 0;
  t.cwiseAbs().maxCoeff(&r, &c);
  double arg = std::arg(t(r, c));
  double window = std::numbers::pi / static_cast<double>(ell);
  // multiply by eps^j to bring arg into (-pi/ell, pi/ell]
  long j = static_cast<long>(std::floor((window - arg) / (2.0 * window)));
  t *= root_of_unity(ell, j);
  return t;
}

}  // namespace qholo
