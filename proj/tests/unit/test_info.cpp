#include <cmath>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"

#include "chowliu/hardinstances.hpp"
#include "chowliu/info.hpp"

using namespace chowliu;

namespace {

std::vector<double> random_table(std::size_t size, Rng& rng) { return rng.floored_simplex(size, 0.0); }

// Sparse tables exercise the 0 log 0 and Delta = -P_x P_y branches.
std::vector<double> sparse_table(std::size_t size, Rng& rng) {
  auto t = rng.floored_simplex(size, 0.0);
  double total = 0;
  for (auto& v : t) {
    if (rng.uniform() < 0.4) v = 0;
    total += v;
  }
  if (total == 0) {
    t[0] = 1;
    total = 1;
  }
  for (auto& v : t) v /= total;
  return t;
}

}  // namespace

TEST_SUITE("info") {
  TEST_CASE("f_kl examples and domain") {
    CHECK(f_kl(0, 0.3) == 0.0);
    CHECK(f_kl(-0.3, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(f_kl(0.25, 0.25) == doctest::Approx(0.09657359027997264).epsilon(1e-13));
    CHECK(f_kl(0, 0) == 0.0);
    CHECK(f_kl(0.2, 0) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(f_kl(-0.4, 0.3), std::domain_error);
    CHECK_THROWS_AS(f_kl(0.8, 0.3), std::domain_error);
    CHECK_THROWS_AS(f_kl(0.0, -0.1), std::domain_error);
    // Series branch agrees with the closed form just outside its range.
    const double b = 0.4;
    for (double a : {1e-5 * b, 3e-5 * b, 9e-5 * b, 1.1e-4 * b}) {
      const double direct = (a + b) * std::log(1 + a / b) - a;
      CHECK(f_kl(a, b) == doctest::Approx(direct).epsilon(1e-6));
      CHECK(f_kl(a, b) >= 0.0);
    }
  }

  TEST_CASE("f_bounds examples") {
    const auto z = f_bounds(0, 0.5);
    CHECK(z.g == 0.0);
    CHECK(z.lower == 0.0);
    CHECK(z.upper == 0.0);
    const auto q = f_bounds(0.25, 0.25);
    CHECK(q.g == doctest::Approx(0.25));
    CHECK(q.lower == doctest::Approx(0.25 / 3));
    const auto lim = f_bounds(-0.3, 0.3);
    CHECK(lim.g == doctest::Approx(0.3));
    CHECK(f_kl(-0.3, 0.3) == doctest::Approx(lim.upper));
  }

  TEST_CASE("f sandwich on a grid") {
    for (int i = 0; i < 60; ++i) {
      const double b = std::pow(10.0, -6.0 + 6.0 * i / 59.0);
      for (int j = 0; j < 60; ++j) {
        const double a = -b + (1.0 - b + b) * j / 59.0;
        if (a > 1 - b) continue;
        const auto fb = f_bounds(a, b);
        const double f = f_kl(a, b);
        CHECK(fb.lower <= f * (1 + 1e-12) + 1e-15);
        CHECK(f <= fb.upper * (1 + 1e-12) + 1e-15);
      }
    }
  }

  TEST_CASE("entropy") {
    CHECK(entropy(std::vector<double>{1, 0, 0}) == 0.0);
    CHECK(entropy(std::vector<double>(4, 0.25)) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(entropy(std::vector<double>{0.7, 0.3}) == doctest::Approx(0.6108643020548935).epsilon(1e-14));
  }

  TEST_CASE("PairTable validation and deltas") {
    CHECK_THROWS_AS(PairTable(2, {0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(PairTable(2, {0.5, 0.5}), std::invalid_argument);
    PairTable t(2, {0.1, 0.2, 0.3, 0.4});
    CHECK(t.px()[0] == doctest::Approx(0.3));
    CHECK(t.py()[1] == doctest::Approx(0.6));
    double s = 0;
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t y = 0; y < 2; ++y) s += t.delta(x, y);
    CHECK(std::abs(s) < 1e-12);
  }

  TEST_CASE("mutual information examples") {
    PairTable prod(2, {0.06, 0.14, 0.24, 0.56});
    CHECK(mutual_information(prod) == doctest::Approx(0.0));
    CHECK(mi_via_f(prod) == doctest::Approx(0.0));
    PairTable copy(2, {0.5, 0, 0, 0.5});
    CHECK(mutual_information(copy) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(mi_via_f(copy) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    const auto r1 = realizable_triple(1, 0.1);
    const std::size_t yz[] = {1, 2};
    CHECK(mutual_information(PairTable(2, r1.marginal(yz))) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  }

  TEST_CASE("mi_via_f matches entropy MI and f <= 1") {
    Rng rng(101);
    for (int rep = 0; rep < 300; ++rep) {
      const std::size_t k = 2 + rng.below(5);
      PairTable t(k, rep % 2 ? random_table(k * k, rng) : sparse_table(k * k, rng));
      CHECK(std::abs(mi_via_f(t) - mutual_information(t)) <= 1e-10);
      for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y) CHECK(f_kl(t.delta(x, y), t.px()[x] * t.py()[y]) <= 1 + 1e-12);
    }
  }

  TEST_CASE("conditional MI examples") {
    std::vector<double> same(8, 0.0);
    same[0] = same[7] = 0.5;
    CHECK(conditional_mi(TripleTable(2, same)) == doctest::Approx(0.0));
    std::vector<double> xor_table(8, 0.0);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) xor_table[(x * 2 + y) * 2 + (x ^ y)] = 0.25;
    CHECK(conditional_mi(TripleTable(2, xor_table)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    // R1 factorizes on X - Y - Z, so I(X;Z|Y) = 0.
    const auto r1 = realizable_triple(1, 0.1);
    const std::size_t xzy[] = {0, 2, 1};
    CHECK(conditional_mi(TripleTable(2, r1.marginal(xzy))) < 1e-12);
    // Zero-mass slices contribute nothing.
    std::vector<double> only_z0(8, 0.0);
    only_z0[0] = only_z0[6] = 0.5;  // (0,0,0), (1,1,0)
    CHECK(conditional_mi(TripleTable(2, only_z0)) == doctest::Approx(std::log(2.0)));
  }

  TEST_CASE("conditional MI equals the entropy form") {
    Rng rng(102);
    for (int rep = 0; rep < 100; ++rep) {
      const std::size_t k = 2 + rng.below(3);
      const auto joint = rep % 2 ? random_table(k * k * k, rng) : sparse_table(k * k * k, rng);
      DenseJoint p(3, Alphabet(k), joint);
      // I(X;Y|Z) = H(X,Z) + H(Y,Z) - H(X,Y,Z) - H(Z)
      const double h = testing::marginal_entropy(p, {0, 2}) + testing::marginal_entropy(p, {1, 2}) -
                       testing::marginal_entropy(p, {0, 1, 2}) - testing::marginal_entropy(p, {2});
      CHECK(std::abs(conditional_mi(TripleTable(k, joint)) - std::max(0.0, h)) < 1e-12);
    }
  }

  TEST_CASE("chain rule gap") {
    std::vector<double> indep(8, 0.125);
    const auto z = chain_rule_gap(TripleTable(2, indep));
    CHECK(std::abs(z.lhs) < 1e-15);
    CHECK(std::abs(z.rhs) < 1e-15);
    std::vector<double> same(8, 0.0);
    same[0] = same[7] = 0.5;
    const auto s = chain_rule_gap(TripleTable(2, same));
    CHECK(std::abs(s.lhs) < 1e-15);
    CHECK(std::abs(s.rhs) < 1e-15);
    Rng rng(103);
    for (int rep = 0; rep < 200; ++rep) {
      const auto g = chain_rule_gap(TripleTable(2, random_table(8, rng)));
      CHECK(std::abs(g.lhs - g.rhs) <= 1e-10);
    }
  }

  TEST_CASE("plug-in estimators agree with the empirical tables") {
    Rng rng(104);
    for (int rep = 0; rep < 100; ++rep) {
      const std::size_t k = 2 + rng.below(4);
      std::vector<std::uint64_t> c(k * k);
      std::uint64_t total = 0;
      for (auto& v : c) {
        v = rng.uniform() < 0.3 ? 0 : rng.below(50);
        total += v;
      }
      if (total == 0) {
        c[0] = 1;
        total = 1;
      }
      std::vector<double> p(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) p[i] = static_cast<double>(c[i]) / static_cast<double>(total);
      CHECK(std::abs(plugin_mutual_information(c, k) - mutual_information(PairTable(k, p))) < 1e-12);

      std::vector<std::uint64_t> c3(k * k * k);
      std::uint64_t t3 = 0;
      for (auto& v : c3) {
        v = rng.uniform() < 0.3 ? 0 : rng.below(30);
        t3 += v;
      }
      if (t3 == 0) {
        c3[0] = 1;
        t3 = 1;
      }
      std::vector<double> p3(c3.size());
      for (std::size_t i = 0; i < c3.size(); ++i) p3[i] = static_cast<double>(c3[i]) / static_cast<double>(t3);
      CHECK(std::abs(plugin_conditional_mi(c3, k) - conditional_mi(TripleTable(k, p3))) < 1e-12);
    }
    const std::vector<std::uint64_t> one{1, 0, 0, 0};
    CHECK(plugin_mutual_information(one, 2) == 0.0);
  }
}
