#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qholo/arith.hpp"
#include "qholo/rng.hpp"

using namespace qholo;

namespace {

// independent oracle: the defining ratio (q^{nd} - q^{-nd})/(q^d - q^{-d})
RatFuncQ qint_oracle(long n, long d) {
  RatFuncQ num = RatFuncQ::q_power(n * d) - RatFuncQ::q_power(-n * d);
  RatFuncQ den = RatFuncQ::q_power(d) - RatFuncQ::q_power(-d);
  return num / den;
}

// floating-point evaluation of a rational function at z, used as an
// oracle against the exact specialize/embed path
Cx eval_at(const RatFuncQ& f, Cx z) {
  auto poly = [&](const LaurentZ& p) {
    Cx acc = 0;
    for (size_t i = 0; i < p.coeffs().size(); ++i) {
      double c = mpq_class(p.coeffs()[i]).get_d();
      acc += c * std::pow(z, static_cast<double>(p.val() + static_cast<long>(i)));
    }
    return acc;
  };
  return poly(f.num()) / poly(f.den());
}

RatFuncQ random_laurent(RngStream& rng) {
  std::vector<mpz_class> c;
  long deg = rng.integer(0, 3);
  for (long i = 0; i <= deg; ++i) c.emplace_back(rng.integer(-5, 5));
  LaurentZ p(rng.integer(-2, 2), std::move(c));
  if (p.is_zero()) return RatFuncQ(1);
  return RatFuncQ(p);
}

RatFuncQ random_ratfunc(RngStream& rng) {
  RatFuncQ den = random_laurent(rng);
  while (den.is_zero()) den = random_laurent(rng);
  return random_laurent(rng) / den;
}

}  // namespace

TEST_CASE("q-integers match the defining ratio") {
  CHECK(qint(0, 1).is_zero());
  CHECK(qint(1, 1) == RatFuncQ(1));
  // [2] = q + q^-1
  RatFuncQ two = RatFuncQ::q_power(1) + RatFuncQ::q_power(-1);
  CHECK(qint(2, 1) == two);
  for (long n = -6; n <= 6; ++n)
    for (long d = 1; d <= 3; ++d) CHECK(qint(n, d) == qint_oracle(n, d));
}

TEST_CASE("q-binomials") {
  for (long m = 0; m <= 5; ++m) CHECK(qbinom(m, 0, 1) == RatFuncQ(1));
  CHECK(qbinom(2, 1, 1) == RatFuncQ::q_power(1) + RatFuncQ::q_power(-1));
  CHECK(qbinom(3, 1, 1) == RatFuncQ::q_power(2) + RatFuncQ(1) + RatFuncQ::q_power(-2));
  CHECK(qbinom(3, 1, 1) == qint(3, 1));
  CHECK_THROWS_AS(qbinom(2, 3, 1), std::domain_error);
}

TEST_CASE("q-Pascal identity up to m = 8") {
  for (long m = 1; m <= 8; ++m)
    for (long n = 0; n <= m; ++n) {
      RatFuncQ lhs = qbinom(m, n);
      RatFuncQ rhs(0);
      if (n <= m - 1) rhs += RatFuncQ::q_power(n) * qbinom(m - 1, n);
      if (n >= 1) rhs += RatFuncQ::q_power(n - m) * qbinom(m - 1, n - 1);
      CHECK(lhs == rhs);
    }
}

TEST_CASE("rational function canonical form") {
  // (q^2 - 1)/(q - 1) reduces to q + 1
  RatFuncQ a = (RatFuncQ::q_power(2) - RatFuncQ(1)) / (RatFuncQ::q_power(1) - RatFuncQ(1));
  CHECK(a == RatFuncQ::q_power(1) + RatFuncQ(1));
  CHECK(a.is_polynomial());
  // sign convention: denominator leading coefficient positive
  RatFuncQ b = RatFuncQ(1) / (RatFuncQ(0) - RatFuncQ::q_power(1));
  CHECK(b.den().leading() > 0);
  // valuation is pulled out of the denominator
  RatFuncQ c = RatFuncQ(1) / RatFuncQ::q_power(3);
  CHECK(c == RatFuncQ::q_power(-3));
}

TEST_CASE("specialize at roots of unity") {
  for (long ell : {3L, 5L, 7L}) {
    CHECK(specialize(RatFuncQ::q_power(ell), ell) == CycNum(ell, 1));
    CHECK(specialize(qint(ell, 1), ell).is_zero());
    CHECK(specialize(RatFuncQ(1), ell) == CycNum(ell, 1));
  }
  for (long ell : {3L, 5L})
    for (long k = 1; k < ell; ++k) CHECK(specialize(qbinom(ell, k, 1), ell).is_zero());
  // pole detection: 1/[l] has a pole at eps
  CHECK_THROWS_AS(specialize(RatFuncQ(1) / qint(3, 1), 3), pole_error);
}

TEST_CASE("specialize is a ring homomorphism on random samples") {
  RngStream rng(20240301, "arith.ringhom");
  int done = 0;
  while (done < 1000) {
    RatFuncQ f = random_ratfunc(rng), g = random_ratfunc(rng);
    long ell = (done % 2) ? 5 : 3;
    try {
      CycNum fg = specialize(f * g, ell);
      CycNum sum = specialize(f + g, ell);
      CHECK(fg == specialize(f, ell) * specialize(g, ell));
      CHECK(sum == specialize(f, ell) + specialize(g, ell));
    } catch (const pole_error&) {
      continue;  // denominator hit the root; redraw
    }
    ++done;
  }
}

TEST_CASE("embed basics") {
  CHECK(embed(CycNum(3, 1)) == Cx(1.0, 0.0));
  Cx eps = embed(CycNum::root_power(3, 1));
  CHECK(std::abs(eps - Cx(-0.5, std::sqrt(3.0) / 2.0)) < 1e-15);
  // 1 + eps + eps^2 = 0
  CycNum s = CycNum(3, 1) + CycNum::root_power(3, 1) + CycNum::root_power(3, 2);
  CHECK(s.is_zero());
  CHECK(std::abs(embed(s)) < 1e-15);
}

TEST_CASE("embed after specialize agrees with floating evaluation") {
  RngStream rng(20240301, "arith.embed");
  for (int t = 0; t < 200; ++t) {
    long ell = (t % 2) ? 5 : 7;
    RatFuncQ f = random_ratfunc(rng);
    Cx z = std::polar(1.0, 2.0 * M_PI / static_cast<double>(ell));
    try {
      Cx exact = embed(specialize(f, ell));
      Cx approx = eval_at(f, z);
      CHECK(std::abs(exact - approx) < 1e-12 * std::max(1.0, std::abs(approx)));
    } catch (const pole_error&) {
    }
  }
}

TEST_CASE("high precision embedding agrees with double path") {
  RngStream rng(20240301, "arith.hp");
  for (int t = 0; t < 50; ++t) {
    long ell = 7;
    RatFuncQ f = random_ratfunc(rng);
    try {
      CycNum c = specialize(f, ell);
      Cx lo = embed(c, 53), hi = embed(c, 256);
      CHECK(std::abs(lo - hi) < 1e-12 * std::max(1.0, std::abs(hi)));
    } catch (const pole_error&) {
    }
  }
  Precision::set_bits(256);
  CHECK(std::abs(embed(CycNum(5, 1)) - Cx(1, 0)) < 1e-15);
  Precision::set_bits(53);
}

TEST_CASE("cyclotomic inverse") {
  for (long ell : {3L, 5L, 9L, 13L}) {
    CycNum x = CycNum::root_power(ell, 1) + CycNum(ell, mpq_class(1, 2));
    CycNum inv = x.inverse();
    CHECK(x * inv == CycNum(ell, 1));
  }
  CHECK_THROWS_AS(CycNum(5).inverse(), pole_error);
}
