#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "qholo/rng.hpp"
#include "qholo/rootdata.hpp"

using namespace qholo;

TEST_CASE("Cartan data for the small series") {
  CartanData a1 = build_cartan("A", 1);
  CHECK(a1.rank == 1);
  CHECK(a1.a[0][0] == 2);
  CHECK(a1.d[0] == 1);

  CartanData a2 = build_cartan("A", 2);
  CHECK(a2.a[0][1] == -1);
  CHECK(a2.a[1][0] == -1);
  CHECK(a2.m[0][1] == 3);

  CartanData b2 = build_cartan("B", 2);
  CHECK(b2.a[0][1] * b2.a[1][0] == 2);
  CHECK(b2.m[0][1] == 4);
  // symmetrized matrix is symmetric
  CHECK(b2.a[0][1] * b2.d[1] == b2.a[1][0] * b2.d[0]);

  CartanData g2 = build_cartan("G", 2);
  CHECK(g2.m[0][1] == 6);

  CHECK_THROWS_AS(build_cartan("E", 4), std::domain_error);
  CHECK_THROWS_AS(build_cartan({{2, -1}, {0, 2}}, Lattice::P), std::domain_error);
  CHECK_THROWS_AS(build_cartan({{2, 1}, {1, 2}}, Lattice::P), std::domain_error);
}

TEST_CASE("simple reflections on weights") {
  CartanData a1 = build_cartan("A", 1);
  // s(omega) = -omega since alpha = 2 omega
  CHECK(simple_reflect(a1, {1}, 0) == IntVec{-1});

  CartanData a2 = build_cartan("A", 2);
  // s_1(omega_1) = omega_2 - omega_1
  CHECK(simple_reflect(a2, {1, 0}, 0) == IntVec{-1, 1});

  RngStream rng(7, "rootdata.involution");
  for (const char* s : {"A", "B"})
    for (long r = 2; r <= 3; ++r) {
      CartanData cd = build_cartan(s, r);
      for (int t = 0; t < 20; ++t) {
        IntVec mu;
        for (long i = 0; i < r; ++i) mu.push_back(rng.integer(-4, 4));
        for (long i = 0; i < r; ++i)
          CHECK(simple_reflect(cd, simple_reflect(cd, mu, i), i) == mu);
      }
    }
}

TEST_CASE("longest words") {
  CartanData a1 = build_cartan("A", 1);
  CHECK(longest_word(a1).letters == std::vector<long>{0});

  CartanData a2 = build_cartan("A", 2);
  ReducedWord w2 = longest_word(a2);
  CHECK(w2.letters == std::vector<long>{0, 1, 0});
  CHECK(is_longest_word(a2, w2));

  CartanData b2 = build_cartan("B", 2);
  ReducedWord wb = longest_word(b2);
  CHECK(wb.letters.size() == 4);
  CHECK(is_longest_word(b2, wb));

  CartanData a3 = build_cartan("A", 3);
  CHECK(longest_word(a3).letters.size() == 6);
  CHECK(is_longest_word(a3, longest_word(a3)));
}

TEST_CASE("convex orders enumerate the positive roots") {
  CartanData a2 = build_cartan("A", 2);
  auto order = convex_order(a2, longest_word(a2));
  REQUIRE(order.size() == 3);
  CHECK(order[0] == IntVec{1, 0});
  CHECK(order[1] == IntVec{1, 1});  // alpha_1 + alpha_2 sits in the middle
  CHECK(order[2] == IntVec{0, 1});

  for (const char* s : {"A", "B", "C"}) {
    for (long r = 2; r <= 3; ++r) {
      if ((s[0] == 'B' || s[0] == 'C') && r < 2) continue;
      CartanData cd = build_cartan(s, r);
      ReducedWord w = longest_word(cd);
      auto betas = convex_order(cd, w);
      auto pos = positive_roots(cd);
      CHECK(betas.size() == pos.size());
      std::set<IntVec> bs(betas.begin(), betas.end()), ps(pos.begin(), pos.end());
      CHECK(bs == ps);
      // convexity: beta_i + beta_j = beta_k with i < j implies i < k < j
      for (size_t i = 0; i < betas.size(); ++i)
        for (size_t j = i + 1; j < betas.size(); ++j) {
          IntVec sum(betas[i].size());
          for (size_t t = 0; t < sum.size(); ++t) sum[t] = betas[i][t] + betas[j][t];
          auto it = std::find(betas.begin(), betas.end(), sum);
          if (it != betas.end()) {
            size_t k = static_cast<size_t>(it - betas.begin());
            CHECK(i < k);
            CHECK(k < j);
          }
        }
    }
  }

  CartanData g2 = build_cartan("G", 2);
  CHECK(convex_order(g2, longest_word(g2)).size() == 6);

  // non-reduced word detection
  CartanData a2b = build_cartan("A", 2);
  ReducedWord bad{{0, 0, 1}};
  CHECK_THROWS_AS(convex_order(a2b, bad), std::domain_error);
}

TEST_CASE("lattice membership") {
  CartanData a2 = build_cartan("A", 2);
  // alpha_1 = 2 omega_1 - omega_2 lies in Q
  CHECK(a2.in_root_lattice({2, -1}));
  // omega_1 does not
  CHECK(!a2.in_root_lattice({1, 0}));
  CartanData a1 = build_cartan("A", 1);
  CHECK(a1.in_root_lattice({2}));
  CHECK(!a1.in_root_lattice({1}));
}

TEST_CASE("pairing convention") {
  // (alpha_i, omega_j) = d_i delta_ij
  CartanData b2 = build_cartan("B", 2);
  for (long i = 0; i < 2; ++i) {
    IntVec omega(2, 0);
    omega[static_cast<size_t>(i)] = 1;
    CHECK(b2.alpha_pair(i, omega) == b2.d[static_cast<size_t>(i)]);
  }
}
