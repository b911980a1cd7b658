#pragma once

// Exact arithmetic layer: integer Laurent polynomials in q, rational
// functions of q in canonical form, the cyclotomic field Q(eps) at a
// primitive odd root of unity, and a controlled-precision complex
// embedding.

#include <gmpxx.h>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qholo {

using Cx = std::complex<double>;

struct pole_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Integer-coefficient Laurent polynomial in q, stored as
// q^val * (c[0] + c[1] q + ... ), with c.front() != 0 and c.back() != 0.
// The zero polynomial has empty c and val == 0.
class LaurentZ {
 public:
  LaurentZ() = default;
  LaurentZ(long n) { set_constant(mpz_class(n)); }
  LaurentZ(const mpz_class& n) { set_constant(n); }
  // coefficients of q^val, q^{val+1}, ...
  LaurentZ(long val, std::vector<mpz_class> coeffs);

  static LaurentZ monomial(const mpz_class& c, long power);

  bool is_zero() const { return c_.empty(); }
  long val() const { return val_; }            // lowest power of q
  long deg() const;                            // highest power of q
  const std::vector<mpz_class>& coeffs() const { return c_; }
  mpz_class coeff(long power) const;           // coefficient of q^power

  LaurentZ operator-() const;
  LaurentZ operator+(const LaurentZ& o) const;
  LaurentZ operator-(const LaurentZ& o) const;
  LaurentZ operator*(const LaurentZ& o) const;
  bool operator==(const LaurentZ& o) const = default;

  // Substitutes q -> q^d, d >= 1.
  LaurentZ stretch(long d) const;
  // Substitutes q -> q^{-1}.
  LaurentZ bar() const;
  mpz_class content() const;  // gcd of coefficients, 0 for zero
  mpz_class leading() const;  // coefficient of the highest power

  std::string str() const;

 private:
  void set_constant(const mpz_class& n);
  void normalize();
  long val_ = 0;
  std::vector<mpz_class> c_;
};

// Rational function of q: num/den with num, den integer Laurent
// polynomials. Canonical form: polynomial gcd removed, the pair of
// integer contents is coprime, den has q-valuation 0 and positive
// leading coefficient. Equal values have equal representations.
class RatFuncQ {
 public:
  RatFuncQ() : num_(), den_(1) {}
  RatFuncQ(long n) : num_(n), den_(1) {}
  RatFuncQ(const LaurentZ& n) : num_(n), den_(1) {}
  RatFuncQ(const LaurentZ& n, const LaurentZ& d);

  static RatFuncQ q_power(long k) { return RatFuncQ(LaurentZ::monomial(1, k)); }

  const LaurentZ& num() const { return num_; }
  const LaurentZ& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return *this == RatFuncQ(1); }
  bool is_polynomial() const;

  RatFuncQ operator-() const;
  RatFuncQ operator+(const RatFuncQ& o) const;
  RatFuncQ operator-(const RatFuncQ& o) const;
  RatFuncQ operator*(const RatFuncQ& o) const;
  RatFuncQ operator/(const RatFuncQ& o) const;
  RatFuncQ& operator+=(const RatFuncQ& o) { return *this = *this + o; }
  RatFuncQ& operator*=(const RatFuncQ& o) { return *this = *this * o; }
  bool operator==(const RatFuncQ& o) const = default;
  bool operator<(const RatFuncQ& o) const;  // arbitrary total order for maps

  RatFuncQ bar() const { return RatFuncQ(num_.bar(), den_.bar()); }

  std::string str() const;

 private:
  void canonicalize();
  LaurentZ num_, den_;
};

// q-integer [n]_{q^d} = (q^{nd} - q^{-nd})/(q^d - q^{-d}); a Laurent polynomial.
RatFuncQ qint(long n, long d = 1);
// [n]_{q^d}!
RatFuncQ qfact(long n, long d = 1);
// Gaussian binomial [m over n]_{q^d}; requires 0 <= n <= m.
RatFuncQ qbinom(long m, long n, long d = 1);

// Element of Q(eps), eps a primitive ell-th root of 1 (ell odd >= 3),
// represented on the power basis eps^0 .. eps^{phi(ell)-1} modulo the
// ell-th cyclotomic polynomial.
class CycNum {
 public:
  CycNum() : level_(0) {}
  explicit CycNum(long level, const mpq_class& c = 0);
  // value eps^k
  static CycNum root_power(long level, long k);
  static const std::vector<mpz_class>& cyclotomic(long level);  // Phi_ell coeffs
  static long phi(long level);

  long level() const { return level_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  bool is_zero() const;

  CycNum operator-() const;
  CycNum operator+(const CycNum& o) const;
  CycNum operator-(const CycNum& o) const;
  CycNum operator*(const CycNum& o) const;
  CycNum inverse() const;  // throws pole_error on zero
  bool operator==(const CycNum& o) const;

  std::string str() const;

 private:
  void check_match(const CycNum& o) const;
  long level_;
  std::vector<mpq_class> c_;  // length phi(level), reduced mod Phi_level
};

// Value of f at q = eps, exact. Throws pole_error when the denominator
// vanishes at eps.
CycNum specialize(const RatFuncQ& f, long level);

// Global precision for the exact -> complex bridge, in mantissa bits.
// 53 evaluates in hardware doubles; anything larger routes through MPFR
// and rounds the result to double storage.
class Precision {
 public:
  static void set_bits(int bits);
  static int bits();
};

// Numerical value of c with eps = exp(2*pi*i/level), computed at the
// given mantissa precision (default: global setting).
Cx embed(const CycNum& c);
Cx embed(const CycNum& c, int bits);

}  // namespace qholo
