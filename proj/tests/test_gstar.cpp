#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "qholo/gstar.hpp"
#include "qholo/rng.hpp"

using namespace qholo;

namespace {

Mat2 random_sl2(RngStream& rng, double scale) {
  Mat2 xi;
  Cx a = rng.sym_cx(scale);
  xi << a, rng.sym_cx(scale), rng.sym_cx(scale), -a;
  return xi.exp();
}

}  // namespace

TEST_CASE("triangular product") {
  GStarPoint id{1.0, 0.0, 0.0, +1};
  CHECK((to_group(id) - Mat2::Identity()).norm() == 0.0);

  GStarPoint upper{1.0, 1.0, 0.0, +1};
  Mat2 u = to_group(upper);
  CHECK(u(0, 0) == Cx(1));
  CHECK(u(0, 1) == Cx(1));
  CHECK(u(1, 0) == Cx(0));

  GStarPoint lower{1.0, 0.0, 1.0, +1};
  Mat2 l = to_group(lower);
  CHECK(l(0, 0) == Cx(1));
  CHECK(l(1, 0) == Cx(-1));
  CHECK(l(0, 1) == Cx(0));

  // explicit form agrees with the factor product
  RngStream rng(11, "gstar.iform");
  for (int t = 0; t < 50; ++t) {
    GStarPoint p{Cx(1) + rng.sym_cx(0.3), rng.sym_cx(0.5), rng.sym_cx(0.5), +1};
    Mat2 direct = p.b_plus() * p.b_minus().inverse();
    CHECK((to_group(p) - direct).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("gauss decomposition") {
  GStarPoint p = gauss(Mat2::Identity(), +1);
  CHECK(p.k == Cx(1));
  CHECK(p.e == Cx(0));
  CHECK(p.f == Cx(0));

  Mat2 g;
  g << Cx(2), Cx(1), Cx(1), Cx(1);
  GStarPoint q = gauss(g, +1);
  CHECK(std::abs(q.k - Cx(1)) < 1e-15);
  CHECK(std::abs(q.e - Cx(1)) < 1e-15);
  CHECK(std::abs(q.f - Cx(-1)) < 1e-15);
  CHECK(std::abs(q.k * q.k - q.e * q.f - Cx(2)) < 1e-15);

  GStarPoint m = gauss(Mat2::Identity(), -1);
  CHECK(m.k == Cx(-1));

  // d = 0 is outside the dense image
  Mat2 w;
  w << Cx(0), Cx(1), Cx(-1), Cx(0);
  CHECK_THROWS_AS(gauss(w), decomposition_error);
  // non-unimodular input
  CHECK_THROWS_AS(gauss(Mat2::Identity() * 2.0), decomposition_error);
}

TEST_CASE("round trip and branch structure on 1000 samples") {
  RngStream rng(11, "gstar.roundtrip");
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    Mat2 g = random_sl2(rng, 0.6);
    for (int branch : {+1, -1}) {
      GStarPoint p = gauss(g, branch);
      worst = std::max(worst, (to_group(p) - g).cwiseAbs().maxCoeff());
    }
    GStarPoint a = gauss(g, +1), b = gauss(g, -1);
    CHECK(a.k == -b.k);
    CHECK(a.e == -b.e);
    CHECK(a.f == -b.f);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("braiding maps") {
  RngStream rng(11, "gstar.braid");
  Mat2 y = random_sl2(rng, 0.4);
  CHECK((braid_left(Mat2::Identity(), y) - y).cwiseAbs().maxCoeff() < 1e-14);

  // upper-unipotent x has trivial minus part
  Mat2 up;
  up << Cx(1), Cx(0.7, 0.2), Cx(0), Cx(1);
  CHECK((braid_left(up, y) - y).cwiseAbs().maxCoeff() < 1e-13);

  CHECK((braid_right(Mat2::Identity(), Mat2::Identity()) - Mat2::Identity()).norm() < 1e-14);
  Mat2 x = random_sl2(rng, 0.4);
  // y = identity: x_L = identity, so x_R = x
  CHECK((braid_right(x, Mat2::Identity()) - x).cwiseAbs().maxCoeff() < 1e-13);

  // oracle: conjugation composed from the explicit factors
  for (int t = 0; t < 100; ++t) {
    Mat2 a = random_sl2(rng, 0.4), b = random_sl2(rng, 0.4);
    GStarPoint ga = gauss(a);
    Mat2 xm;
    xm << Cx(1) / ga.k, Cx(0), ga.f, ga.k;
    Mat2 expected = xm * b * xm.inverse();
    CHECK((braid_left(a, b) - expected).cwiseAbs().maxCoeff() < 1e-13);
    // trace conservation along the strands
    auto [l, r] = braiding_map(a, b);
    CHECK(std::abs(l.trace() - b.trace()) < 1e-12);
    CHECK(std::abs(r.trace() - a.trace()) < 1e-12);
    // diagonal-entry product is conserved
    CHECK(std::abs(l(1, 1) * r(1, 1) - a(1, 1) * b(1, 1)) < 1e-12);
    // inverse map
    auto [xx, yy] = inverse_braiding_map(l, r);
    CHECK((xx - a).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((yy - b).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("braid relation on 1000 near-identity triples") {
  RngStream rng(11, "gstar.braidrel");
  CHECK(braid_check(Mat2::Identity(), Mat2::Identity(), Mat2::Identity()) == 0.0);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    Mat2 x = random_sl2(rng, 0.1), y = random_sl2(rng, 0.1), z = random_sl2(rng, 0.1);
    worst = std::max(worst, braid_check(x, y, z));
  }
  CHECK(worst < 1e-9);
  // one element far from identity but decomposable
  RngStream rng2(12, "gstar.braidfar");
  double worst_far = 0;
  for (int t = 0; t < 50; ++t) {
    Mat2 x = random_sl2(rng2, 0.8), y = random_sl2(rng2, 0.1), z = random_sl2(rng2, 0.1);
    try {
      worst_far = std::max(worst_far, braid_check(x, y, z));
    } catch (const decomposition_error&) {
    }
  }
  CHECK(worst_far < 1e-7);
}

TEST_CASE("dressing action") {
  RngStream rng(11, "gstar.dress");
  GStarPoint x{Cx(1.05, 0.1), Cx(0.2, -0.1), Cx(-0.15, 0.05), +1};
  GStarPoint same = dress(Mat2::Identity(), x);
  CHECK(std::abs(same.k - x.k) < 1e-12);

  // diagonal g scales e by lambda^2 on an upper point
  Cx lam(1.2, 0.1);
  Mat2 diag = Mat2::Zero();
  diag(0, 0) = lam;
  diag(1, 1) = Cx(1) / lam;
  GStarPoint upper{1.0, Cx(0.3, 0.1), 0.0, +1};
  GStarPoint moved = dress(diag, upper);
  CHECK(std::abs(moved.e - lam * lam * upper.e) < 1e-12);
  CHECK(std::abs(moved.k - upper.k) < 1e-12);

  for (int t = 0; t < 50; ++t) {
    Mat2 g = random_sl2(rng, 0.3), h = random_sl2(rng, 0.3);
    GStarPoint p = gauss(random_sl2(rng, 0.3), +1);
    GStarPoint gp = dress(g, p);
    CHECK((to_group(gp) - g * to_group(p) * g.inverse()).cwiseAbs().maxCoeff() < 1e-11);
    // action property, compared on the group and on k up to the deck sign
    GStarPoint ghp = dress(g, dress(h, p));
    GStarPoint gh_p = dress(g * h, p);
    CHECK((to_group(ghp) - to_group(gh_p)).cwiseAbs().maxCoeff() < 1e-10);
    double kd = std::min(std::abs(ghp.k - gh_p.k), std::abs(ghp.k + gh_p.k));
    CHECK(kd < 1e-10);
  }
}

TEST_CASE("poisson bracket on the coordinate ring") {
  PoissonPoly k = PoissonPoly::k(), e = PoissonPoly::e(), f = PoissonPoly::f();
  CHECK(pbracket(k, k).is_zero());
  CHECK(pbracket(e, f) == PoissonPoly::k(2) - PoissonPoly::k(-2));
  CHECK(pbracket(k, e) == PoissonPoly::monomial({1, 1, 0}, 1));
  CHECK(pbracket(k, f) == PoissonPoly::monomial({1, 0, 1}, -1));

  // antisymmetry, Leibniz, Jacobi on monomials of degree <= 3
  std::vector<PoissonPoly> monos;
  for (long a = -1; a <= 1; ++a)
    for (long b = 0; b <= 1; ++b)
      for (long c = 0; c <= 1; ++c) monos.push_back(PoissonPoly::monomial({a, b, c}, 1));
  for (const auto& p : monos)
    for (const auto& q : monos) {
      CHECK((pbracket(p, q) + pbracket(q, p)).is_zero());
      for (const auto& r : monos) {
        PoissonPoly leib = pbracket(p * q, r) - p * pbracket(q, r) - pbracket(p, r) * q;
        CHECK(leib.is_zero());
        PoissonPoly jac =
            pbracket(p, pbracket(q, r)) + pbracket(q, pbracket(r, p)) + pbracket(r, pbracket(p, q));
        CHECK(jac.is_zero());
      }
    }
}

TEST_CASE("classical braid automorphism") {
  PoissonPoly k = PoissonPoly::k(), e = PoissonPoly::e(), f = PoissonPoly::f();
  CHECK(classical_tau(e) == -(f * PoissonPoly::k(-2)));
  CHECK(classical_tau(f) == -(e * PoissonPoly::k(2)));
  CHECK(classical_tau(k) == PoissonPoly::k(-1));
  std::vector<PoissonPoly> gens = {k, e, f, e * f, k * e, PoissonPoly::k(-1) * f};
  for (const auto& a : gens)
    for (const auto& b : gens)
      CHECK(classical_tau(pbracket(a, b)) == pbracket(classical_tau(a), classical_tau(b)));
}
