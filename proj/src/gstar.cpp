#include "qholo/gstar.hpp"

#include <cmath>
#include <sstream>

namespace qholo {

Mat2 GStarPoint::b_plus() const {
  Mat2 m;
  m << k, e, Cx(0), Cx(1) / k;
  return m;
}

Mat2 GStarPoint::b_minus() const {
  Mat2 m;
  m << Cx(1) / k, Cx(0), f, k;
  return m;
}

Mat2 to_group(const GStarPoint& p) {
  if (p.k == Cx(0)) throw decomposition_error("to_group: k = 0");
  Mat2 m;
  m << p.k * p.k - p.e * p.f, p.e / p.k, -p.f / p.k, Cx(1) / (p.k * p.k);
  return m;
}

bool gauss_decomposable(const Mat2& g, double tol) {
  return std::abs(g(1, 1)) > tol && std::abs(g.determinant() - Cx(1)) <= tol * 10;
}

GStarPoint gauss(const Mat2& g, int branch, double det_tol) {
  Cx d = g(1, 1);
  if (std::abs(d) < 1e-12)
    throw decomposition_error("gauss: lower-right entry vanishes (outside the dense image)");
  if (std::abs(g.determinant() - Cx(1)) > det_tol)
    throw decomposition_error("gauss: determinant is not 1");
  // principal square root of 1/d
  Cx k = static_cast<double>(branch) * std::exp(-0.5 * std::log(d));
  return {k, g(0, 1) * k, -g(1, 0) * k, branch};
}

Mat2 braid_left(const Mat2& x, const Mat2& y) {
  Mat2 xm = gauss(x).b_minus();
  return xm * y * xm.inverse();
}

Mat2 braid_right(const Mat2& x, const Mat2& y) {
  Mat2 up = gauss(braid_left(x, y)).b_plus();
  return up.inverse() * x * up;
}

ColorPair braiding_map(const Mat2& x, const Mat2& y) {
  Mat2 l = braid_left(x, y);
  Mat2 up = gauss(l).b_plus();
  return {l, up.inverse() * x * up};
}

ColorPair inverse_braiding_map(const Mat2& xl, const Mat2& xr) {
  Mat2 up = gauss(xl).b_plus();
  Mat2 x = up * xr * up.inverse();
  Mat2 xm = gauss(x).b_minus();
  Mat2 y = xm.inverse() * xl * xm;
  return {x, y};
}

double braid_check(const Mat2& x, const Mat2& y, const Mat2& z) {
  // pair-map braid relation: B12 B23 B12 = B23 B12 B23
  auto [l1, r1] = braiding_map(x, y);
  auto [l2, r2] = braiding_map(r1, z);
  auto [l3, r3] = braiding_map(l1, l2);
  auto [m1, s1] = braiding_map(y, z);
  auto [m2, s2] = braiding_map(x, m1);
  auto [m3, s3] = braiding_map(s2, s1);
  double d1 = (l3 - m2).cwiseAbs().maxCoeff();
  double d2 = (r3 - m3).cwiseAbs().maxCoeff();
  double d3 = (r2 - s3).cwiseAbs().maxCoeff();
  return std::max({d1, d2, d3});
}

GStarPoint dress(const Mat2& g, const GStarPoint& x, int max_steps) {
  Mat2 base = to_group(x);
  int steps = 16;
  while (true) {
    bool ok = true;
    Cx k_prev = x.k;
    GStarPoint cur = x;
    for (int i = 1; i <= steps && ok; ++i) {
      double t = static_cast<double>(i) / steps;
      Mat2 gt = (1.0 - t) * Mat2::Identity() + t * g;
      Cx det = gt.determinant();
      if (std::abs(det) < 1e-8) {
        ok = false;
        break;
      }
      gt /= std::sqrt(det);
      Mat2 ct = gt * base * gt.inverse();
      if (!gauss_decomposable(ct, 1e-8)) {
        ok = false;
        break;
      }
      GStarPoint principal = gauss(ct, +1);
      // pick the sheet closest to the previous step
      GStarPoint a = principal, b = principal.opposite();
      GStarPoint pick = (std::abs(a.k - k_prev) <= std::abs(b.k - k_prev)) ? a : b;
      if (std::abs(pick.k - k_prev) > 0.5 * std::abs(k_prev)) {
        ok = false;  // jump too large; refine
        break;
      }
      k_prev = pick.k;
      cur = pick;
    }
    if (ok) return cur;
    steps *= 4;
    if (steps > max_steps)
      throw decomposition_error("dress: branch continuity failed along the path");
  }
}

// ---------------------------------------------------------------------------
// PoissonPoly

PoissonPoly PoissonPoly::monomial(PoissonMono m, const mpq_class& c) {
  PoissonPoly p;
  p.add_term(m, c);
  return p;
}

void PoissonPoly::add_term(const PoissonMono& m, const mpq_class& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

PoissonPoly PoissonPoly::operator-() const {
  PoissonPoly r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

PoissonPoly PoissonPoly::operator+(const PoissonPoly& o) const {
  PoissonPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

PoissonPoly PoissonPoly::operator-(const PoissonPoly& o) const { return *this + (-o); }

PoissonPoly PoissonPoly::operator*(const PoissonPoly& o) const {
  PoissonPoly r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_)
      r.add_term({m1.dk + m2.dk, m1.de + m2.de, m1.df + m2.df}, c1 * c2);
  return r;
}

std::string PoissonPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    if (m.dk) os << " k^" << m.dk;
    if (m.de) os << " e^" << m.de;
    if (m.df) os << " f^" << m.df;
  }
  return os.str();
}

namespace {

// partial derivatives of a monomial, as (coefficient-multiplier, new monomial)
PoissonPoly d_dk(const PoissonMono& m) {
  if (m.dk == 0) return {};
  return PoissonPoly::monomial({m.dk - 1, m.de, m.df}, m.dk);
}
PoissonPoly d_de(const PoissonMono& m) {
  if (m.de == 0) return {};
  return PoissonPoly::monomial({m.dk, m.de - 1, m.df}, m.de);
}
PoissonPoly d_df(const PoissonMono& m) {
  if (m.df == 0) return {};
  return PoissonPoly::monomial({m.dk, m.de, m.df - 1}, m.df);
}

}  // namespace

PoissonPoly pbracket(const PoissonPoly& a, const PoissonPoly& b) {
  // {P,Q} = (P_k Q_e - P_e Q_k) {k,e} + (P_k Q_f - P_f Q_k) {k,f}
  //       + (P_e Q_f - P_f Q_e) {e,f}
  PoissonPoly ke = PoissonPoly::monomial({1, 1, 0}, 1);         // k e
  PoissonPoly kf = PoissonPoly::monomial({1, 0, 1}, -1);        // -k f
  PoissonPoly ef = PoissonPoly::k(2) - PoissonPoly::k(-2);      // k^2 - k^-2
  PoissonPoly out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      PoissonPoly scale = PoissonPoly::constant(ca * cb);
      out = out + scale * (d_dk(ma) * d_de(mb) - d_de(ma) * d_dk(mb)) * ke;
      out = out + scale * (d_dk(ma) * d_df(mb) - d_df(ma) * d_dk(mb)) * kf;
      out = out + scale * (d_de(ma) * d_df(mb) - d_df(ma) * d_de(mb)) * ef;
    }
  return out;
}

PoissonPoly classical_tau(const PoissonPoly& p) {
  // tau(k^a e^b f^c) = (-1)^{b+c} k^{-a-2b+2c} e^c f^b
  PoissonPoly out;
  for (const auto& [m, c] : p.terms()) {
    mpq_class coeff = ((m.de + m.df) % 2 == 0) ? c : -c;
    out = out + PoissonPoly::monomial({-m.dk - 2 * m.de + 2 * m.df, m.df, m.de}, coeff);
  }
  return out;
}

}  // namespace qholo
