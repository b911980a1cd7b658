#include "qholo/arith.hpp"

#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace qholo {

// ---------------------------------------------------------------------------
// LaurentZ

LaurentZ::LaurentZ(long val, std::vector<mpz_class> coeffs)
    : val_(val), c_(std::move(coeffs)) {
  normalize();
}

LaurentZ LaurentZ::monomial(const mpz_class& c, long power) {
  if (c == 0) return LaurentZ();
  return LaurentZ(power, {c});
}

void LaurentZ::set_constant(const mpz_class& n) {
  if (n != 0) c_ = {n};
}

void LaurentZ::normalize() {
  size_t lo = 0;
  while (lo < c_.size() && c_[lo] == 0) ++lo;
  size_t hi = c_.size();
  while (hi > lo && c_[hi - 1] == 0) --hi;
  if (lo == hi) {
    c_.clear();
    val_ = 0;
    return;
  }
  if (lo > 0) {
    c_.erase(c_.begin(), c_.begin() + static_cast<long>(lo));
    val_ += static_cast<long>(lo);
  }
  c_.resize(hi - lo);
}

long LaurentZ::deg() const {
  if (is_zero()) return 0;
  return val_ + static_cast<long>(c_.size()) - 1;
}

mpz_class LaurentZ::coeff(long power) const {
  long idx = power - val_;
  if (idx < 0 || idx >= static_cast<long>(c_.size())) return 0;
  return c_[static_cast<size_t>(idx)];
}

LaurentZ LaurentZ::operator-() const {
  LaurentZ r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

LaurentZ LaurentZ::operator+(const LaurentZ& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  long lo = std::min(val_, o.val_);
  long hi = std::max(deg(), o.deg());
  std::vector<mpz_class> c(static_cast<size_t>(hi - lo + 1));
  for (size_t i = 0; i < c_.size(); ++i) c[static_cast<size_t>(val_ - lo) + i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) c[static_cast<size_t>(o.val_ - lo) + i] += o.c_[i];
  return LaurentZ(lo, std::move(c));
}

LaurentZ LaurentZ::operator-(const LaurentZ& o) const { return *this + (-o); }

LaurentZ LaurentZ::operator*(const LaurentZ& o) const {
  if (is_zero() || o.is_zero()) return LaurentZ();
  std::vector<mpz_class> c(c_.size() + o.c_.size() - 1);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  return LaurentZ(val_ + o.val_, std::move(c));
}

LaurentZ LaurentZ::stretch(long d) const {
  if (d == 1 || is_zero()) return d == 1 ? *this : LaurentZ();
  std::vector<mpz_class> c(static_cast<size_t>((c_.size() - 1) * static_cast<size_t>(d) + 1));
  for (size_t i = 0; i < c_.size(); ++i) c[i * static_cast<size_t>(d)] = c_[i];
  return LaurentZ(val_ * d, std::move(c));
}

LaurentZ LaurentZ::bar() const {
  if (is_zero()) return *this;
  std::vector<mpz_class> c(c_.rbegin(), c_.rend());
  return LaurentZ(-deg(), std::move(c));
}

mpz_class LaurentZ::content() const {
  mpz_class g = 0;
  for (const auto& c : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

mpz_class LaurentZ::leading() const { return is_zero() ? mpz_class(0) : c_.back(); }

std::string LaurentZ::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    long p = val_ + static_cast<long>(i);
    mpz_class a = c_[i];
    if (!first) os << (a > 0 ? " + " : " - ");
    else if (a < 0) os << "-";
    first = false;
    mpz_class mag = abs(a);
    if (mag != 1 || p == 0) os << mag.get_str();
    if (p != 0) {
      if (mag != 1) os << "*";
      os << "q";
      if (p != 1) os << "^" << p;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// dense rational polynomials (ascending coefficients), used only for gcd
// and exact division inside RatFuncQ canonicalization

namespace {

using QPoly = std::vector<mpq_class>;

void qp_trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// division with remainder; b non-zero
std::pair<QPoly, QPoly> qp_divmod(QPoly a, const QPoly& b) {
  QPoly quot;
  if (a.size() >= b.size()) quot.resize(a.size() - b.size() + 1);
  while (a.size() >= b.size() && !a.empty()) {
    mpq_class c = a.back() / b.back();
    size_t shift = a.size() - b.size();
    quot[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    qp_trim(a);
    if (a.size() < b.size()) break;
  }
  qp_trim(quot);
  return {quot, a};
}

QPoly qp_gcd(QPoly a, QPoly b) {
  qp_trim(a);
  qp_trim(b);
  while (!b.empty()) {
    auto [q, r] = qp_divmod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    mpq_class lead = a.back();
    for (auto& c : a) c /= lead;  // monic
  }
  return a;
}

QPoly to_qpoly(const LaurentZ& p) {
  // drops the q-valuation; caller tracks it separately
  QPoly r;
  r.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) r.emplace_back(c);
  return r;
}

LaurentZ to_laurent(const QPoly& p, long val) {
  // clears denominators; result is the primitive integer polynomial times
  // the common denominator (callers re-normalize contents afterwards)
  mpz_class lcm = 1;
  for (const auto& c : p) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<mpz_class> c(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    mpq_class v = p[i] * lcm;
    c[i] = v.get_num();
  }
  return LaurentZ(val, std::move(c));
}

}  // namespace

// ---------------------------------------------------------------------------
// RatFuncQ

RatFuncQ::RatFuncQ(const LaurentZ& n, const LaurentZ& d) : num_(n), den_(d) {
  if (d.is_zero()) throw std::domain_error("RatFuncQ: zero denominator");
  canonicalize();
}

void RatFuncQ::canonicalize() {
  if (num_.is_zero()) {
    den_ = LaurentZ(1);
    return;
  }
  // valuation: pull the full q-power out of the denominator
  long v = num_.val() - den_.val();
  QPoly a = to_qpoly(num_), b = to_qpoly(den_);
  QPoly g = qp_gcd(a, b);
  if (g.size() > 1) {
    a = qp_divmod(a, g).first;
    b = qp_divmod(b, g).first;
  }
  LaurentZ n = to_laurent(a, 0), d = to_laurent(b, 0);
  mpz_class cn = n.content(), cd = d.content();
  mpz_class g2;
  mpz_gcd(g2.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
  if (d.leading() < 0) g2 = -g2;
  if (g2 != 1) {
    std::vector<mpz_class> nc = n.coeffs(), dc = d.coeffs();
    for (auto& c : nc) c /= g2;
    for (auto& c : dc) c /= g2;
    n = LaurentZ(n.val(), std::move(nc));
    d = LaurentZ(d.val(), std::move(dc));
  }
  num_ = LaurentZ(n.val() + v, std::vector<mpz_class>(n.coeffs()));
  den_ = d;
}

bool RatFuncQ::is_polynomial() const { return den_ == LaurentZ(1); }

RatFuncQ RatFuncQ::operator-() const {
  RatFuncQ r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFuncQ RatFuncQ::operator+(const RatFuncQ& o) const {
  return RatFuncQ(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFuncQ RatFuncQ::operator-(const RatFuncQ& o) const { return *this + (-o); }

RatFuncQ RatFuncQ::operator*(const RatFuncQ& o) const {
  return RatFuncQ(num_ * o.num_, den_ * o.den_);
}

RatFuncQ RatFuncQ::operator/(const RatFuncQ& o) const {
  if (o.is_zero()) throw std::domain_error("RatFuncQ: division by zero");
  return RatFuncQ(num_ * o.den_, den_ * o.num_);
}

bool RatFuncQ::operator<(const RatFuncQ& o) const {
  auto key = [](const LaurentZ& p) {
    return std::tuple(p.val(), p.coeffs().size());
  };
  if (key(num_) != key(o.num_)) return key(num_) < key(o.num_);
  if (num_.coeffs() != o.num_.coeffs()) return num_.coeffs() < o.num_.coeffs();
  if (key(den_) != key(o.den_)) return key(den_) < key(o.den_);
  return den_.coeffs() < o.den_.coeffs();
}

std::string RatFuncQ::str() const {
  if (is_polynomial()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

RatFuncQ qint(long n, long d) {
  if (d < 1) throw std::domain_error("qint: d must be positive");
  // [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}, with [-n] = -[n]
  long s = n < 0 ? -1 : 1;
  long m = s * n;
  if (m == 0) return RatFuncQ(0);
  std::vector<mpz_class> c(static_cast<size_t>(2 * m - 1));
  for (long i = 0; i < m; ++i) c[static_cast<size_t>(2 * i)] = s;
  return RatFuncQ(LaurentZ(1 - m, std::move(c)).stretch(d));
}

RatFuncQ qfact(long n, long d) {
  if (n < 0) throw std::domain_error("qfact: n must be nonnegative");
  RatFuncQ r(1);
  for (long k = 2; k <= n; ++k) r = r * qint(k, d);
  return r;
}

RatFuncQ qbinom(long m, long n, long d) {
  if (n < 0 || n > m) throw std::domain_error("qbinom: requires 0 <= n <= m");
  RatFuncQ r = qfact(m, d) / (qfact(n, d) * qfact(m - n, d));
  if (!r.is_polynomial()) throw std::logic_error("qbinom: non-polynomial quotient");
  return r;
}

// ---------------------------------------------------------------------------
// CycNum

namespace {

// ascending integer coefficients of x^n - 1 divided exactly by d (monic)
std::vector<mpz_class> zp_divide_monic(std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
  std::vector<mpz_class> quot(a.size() - b.size() + 1);
  for (size_t k = quot.size(); k-- > 0;) {
    mpz_class c = a[k + b.size() - 1];
    quot[k] = c;
    if (c == 0) continue;
    for (size_t i = 0; i < b.size(); ++i) a[k + i] -= c * b[i];
  }
  return quot;
}

std::vector<mpz_class> cyclotomic_poly(long n) {
  // Phi_n via exact division of x^n - 1 by the product of Phi_d, d | n, d < n
  if (n == 1) return {-1, 1};
  std::vector<mpz_class> num(static_cast<size_t>(n + 1));
  num[0] = -1;
  num[static_cast<size_t>(n)] = 1;
  for (long d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    num = zp_divide_monic(std::move(num), cyclotomic_poly(d));
  }
  return num;
}

std::mutex cyclo_mutex;

}  // namespace

const std::vector<mpz_class>& CycNum::cyclotomic(long level) {
  static std::map<long, std::vector<mpz_class>> cache;
  std::lock_guard<std::mutex> lock(cyclo_mutex);
  auto it = cache.find(level);
  if (it != cache.end()) return it->second;
  return cache.emplace(level, cyclotomic_poly(level)).first->second;
}

long CycNum::phi(long level) {
  return static_cast<long>(cyclotomic(level).size()) - 1;
}

CycNum::CycNum(long level, const mpq_class& c) : level_(level) {
  if (level < 3 || level % 2 == 0)
    throw std::domain_error("CycNum: level must be odd and >= 3");
  c_.assign(static_cast<size_t>(phi(level)), 0);
  c_[0] = c;
}

CycNum CycNum::root_power(long level, long k) {
  CycNum r(level);
  long d = static_cast<long>(r.c_.size());
  k %= level;
  if (k < 0) k += level;
  if (k < d) {
    r.c_[static_cast<size_t>(k)] = 1;
    return r;
  }
  // reduce eps^k via the cyclotomic relation, folding down one power at a time
  std::vector<mpq_class> acc(static_cast<size_t>(k + 1));
  acc[static_cast<size_t>(k)] = 1;
  const auto& mod = cyclotomic(level);
  for (long p = k; p >= d; --p) {
    mpq_class lead = acc[static_cast<size_t>(p)];
    if (lead == 0) continue;
    acc[static_cast<size_t>(p)] = 0;
    for (long i = 0; i < d; ++i)
      acc[static_cast<size_t>(p - d + i)] -= lead * mod[static_cast<size_t>(i)];
  }
  for (long i = 0; i < d; ++i) r.c_[static_cast<size_t>(i)] = acc[static_cast<size_t>(i)];
  return r;
}

bool CycNum::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

void CycNum::check_match(const CycNum& o) const {
  if (level_ != o.level_) throw std::domain_error("CycNum: level mismatch");
}

CycNum CycNum::operator-() const {
  CycNum r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

CycNum CycNum::operator+(const CycNum& o) const {
  check_match(o);
  CycNum r = *this;
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

CycNum CycNum::operator-(const CycNum& o) const { return *this + (-o); }

CycNum CycNum::operator*(const CycNum& o) const {
  check_match(o);
  size_t d = c_.size();
  std::vector<mpq_class> acc(2 * d - 1);
  for (size_t i = 0; i < d; ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < d; ++j) acc[i + j] += c_[i] * o.c_[j];
  }
  const auto& mod = cyclotomic(level_);
  for (size_t p = acc.size(); p-- > d;) {
    mpq_class lead = acc[p];
    if (lead == 0) continue;
    acc[p] = 0;
    for (size_t i = 0; i < d; ++i) acc[p - d + i] -= lead * mod[i];
  }
  CycNum r(level_);
  for (size_t i = 0; i < d; ++i) r.c_[i] = acc[i];
  return r;
}

CycNum CycNum::inverse() const {
  if (is_zero()) throw pole_error("CycNum: inverse of zero");
  // extended Euclid in Q[x] against Phi_level
  QPoly a;
  for (const auto& c : cyclotomic(level_)) a.emplace_back(c);
  QPoly b(c_.begin(), c_.end());
  qp_trim(b);
  QPoly s0 = {}, s1 = {mpq_class(1)};  // coefficients of b in the running combos
  QPoly r0 = a, r1 = b;
  while (true) {
    auto [q, r] = qp_divmod(r0, r1);
    if (r.empty()) break;
    // s_new = s0 - q*s1
    QPoly qs;
    if (!q.empty() && !s1.empty()) {
      qs.assign(q.size() + s1.size() - 1, 0);
      for (size_t i = 0; i < q.size(); ++i)
        for (size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
    }
    QPoly sn = s0;
    sn.resize(std::max(sn.size(), qs.size()));
    for (size_t i = 0; i < qs.size(); ++i) sn[i] -= qs[i];
    qp_trim(sn);
    s0 = std::move(s1);
    s1 = std::move(sn);
    r0 = std::move(r1);
    r1 = std::move(r);
  }
  if (r1.size() != 1) throw pole_error("CycNum: not invertible (zero divisor)");
  mpq_class unit = r1[0];
  CycNum out(level_);
  for (size_t i = 0; i < s1.size() && i < out.c_.size(); ++i) out.c_[i] = s1[i] / unit;
  return out;
}

bool CycNum::operator==(const CycNum& o) const {
  return level_ == o.level_ && c_ == o.c_;
}

std::string CycNum::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) os << ", ";
    os << c_[i].get_str();
  }
  os << "]_" << level_;
  return os.str();
}

CycNum specialize(const RatFuncQ& f, long level) {
  auto eval = [&](const LaurentZ& p) {
    CycNum acc(level);
    if (p.is_zero()) return acc;
    for (size_t i = 0; i < p.coeffs().size(); ++i) {
      if (p.coeffs()[i] == 0) continue;
      CycNum term = CycNum::root_power(level, p.val() + static_cast<long>(i));
      acc = acc + CycNum(level, mpq_class(p.coeffs()[i])) * term;
    }
    return acc;
  };
  CycNum n = eval(f.num());
  CycNum d = eval(f.den());
  if (d.is_zero()) throw pole_error("specialize: denominator vanishes at eps");
  return n * d.inverse();
}

// ---------------------------------------------------------------------------
// Precision / embed

namespace {
std::atomic<int> g_bits{53};
}

void Precision::set_bits(int bits) {
  if (bits < 24) throw std::domain_error("Precision: too few bits");
  g_bits.store(bits);
}

int Precision::bits() { return g_bits.load(); }

Cx embed(const CycNum& c) { return embed(c, Precision::bits()); }

Cx embed(const CycNum& c, int bits) {
  long ell = c.level();
  if (bits <= 53) {
    double re = 0, im = 0;
    for (size_t j = 0; j < c.coeffs().size(); ++j) {
      if (c.coeffs()[j] == 0) continue;
      double a = c.coeffs()[j].get_d();
      double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(ell);
      re += a * std::cos(th);
      im += a * std::sin(th);
    }
    return {re, im};
  }
  mpfr_t re, im, th, co, si, coef, tmp;
  mpfr_inits2(bits, re, im, th, co, si, coef, tmp, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(re, 1);
  mpfr_set_zero(im, 1);
  for (size_t j = 0; j < c.coeffs().size(); ++j) {
    if (c.coeffs()[j] == 0) continue;
    mpfr_const_pi(th, MPFR_RNDN);
    mpfr_mul_si(th, th, 2 * static_cast<long>(j), MPFR_RNDN);
    mpfr_div_si(th, th, ell, MPFR_RNDN);
    mpfr_sin_cos(si, co, th, MPFR_RNDN);
    mpfr_set_q(coef, c.coeffs()[j].get_mpq_t(), MPFR_RNDN);
    mpfr_mul(tmp, coef, co, MPFR_RNDN);
    mpfr_add(re, re, tmp, MPFR_RNDN);
    mpfr_mul(tmp, coef, si, MPFR_RNDN);
    mpfr_add(im, im, tmp, MPFR_RNDN);
  }
  Cx out(mpfr_get_d(re, MPFR_RNDN), mpfr_get_d(im, MPFR_RNDN));
  mpfr_clears(re, im, th, co, si, coef, tmp, static_cast<mpfr_ptr>(nullptr));
  return out;
}

}  // namespace qholo
