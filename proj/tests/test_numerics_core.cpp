#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "permlab/combinatorics.hpp"
#include "permlab/ext_real.hpp"
#include "permlab/matrix.hpp"
#include "test_support.hpp"

using namespace permlab;

namespace {

std::vector<int> cols(std::initializer_list<int> c) { return std::vector<int>(c); }

}  // namespace

TEST_CASE("column means and residuals") {
  auto z = make_rational_matrix({{1, 2}, {3, 4}, {5, 6}});
  auto cs = column_stats(z);
  CHECK(cs.mean[0] == Rational(3));
  CHECK(cs.mean[1] == Rational(4));
  CHECK(cs.residual(0, 0) == Rational(-2));
  CHECK(cs.residual(2, 1) == Rational(2));
}

TEST_CASE("residuals of identical rows vanish") {
  auto z = identical_rows_matrix<Rational>(4, {make_ratio(1, 3), Rational(2)});
  auto cs = column_stats(z);
  for (int j = 0; j < z.rows(); ++j) {
    for (int r = 0; r < z.cols(); ++r) CHECK(cs.residual(j, r) == Rational(0));
  }
}

TEST_CASE("1x1 matrix stats") {
  RectMatrix<Rational> z(1, 1);
  z(0, 0) = make_ratio(7, 5);
  auto cs = column_stats(z);
  CHECK(cs.mean[0] == make_ratio(7, 5));
  CHECK(cs.residual(0, 0) == Rational(0));
}

TEST_CASE("residual columns sum to zero exactly") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    auto z = testing::random_rational(5, 3, seed);
    auto cs = column_stats(z);
    for (int r = 0; r < z.cols(); ++r) {
      Rational s(0);
      for (int j = 0; j < z.rows(); ++j) s = Rational(s + cs.residual(j, r));
      CHECK(s == Rational(0));
    }
  }
}

TEST_CASE("pair differences") {
  auto z = make_rational_matrix({{1, 2}, {3, 4}});
  CHECK(pair_diff(z, 0, 1, 0) == Rational(-2));
  CHECK(pair_diff(z, 0, 0, 1) == Rational(0));
  CHECK_THROWS_AS(pair_diff(z, 0, 2, 0), std::out_of_range);

  // antisymmetry on a random matrix
  auto w = testing::random_rational(4, 3, 99);
  for (int u = 0; u < 4; ++u) {
    for (int v = 0; v < 4; ++v) {
      for (int r = 0; r < 3; ++r) {
        CHECK(Rational(pair_diff(w, u, v, r) + pair_diff(w, v, u, r)) == Rational(0));
      }
    }
  }
}

TEST_CASE("injection products") {
  auto z = make_rational_matrix({{1, 2}, {3, 4}, {5, 6}});
  std::vector<int> assign = {1, 2};  // rows for columns 0,1
  auto all = cols({0, 1});
  CHECK(injection_product<Rational>(z, assign, all) == Rational(18));
  CHECK(injection_product<Rational>(z, assign, cols({})) == Rational(1));
  CHECK(injection_product<Rational>(z, assign, cols({1})) == Rational(6));

  std::vector<int> partial = {0, -1};
  CHECK_THROWS_AS(injection_product<Rational>(z, partial, all), std::out_of_range);
}

TEST_CASE("injection sums: count, single column, full set") {
  auto z4 = testing::random_rational(4, 2, 5);
  CHECK(injection_sum<Rational>(z4, cols({})) == Rational(12));  // 4!/2!

  RectMatrix<Rational> z(3, 2);
  z(0, 0) = Rational(1);
  z(1, 0) = Rational(3);
  z(2, 0) = Rational(5);
  z(0, 1) = Rational(7);
  z(1, 1) = Rational(11);
  z(2, 1) = Rational(13);
  CHECK(injection_sum<Rational>(z, cols({0})) == Rational(18));  // (3!/1!) * mean

  auto z2 = make_rational_matrix({{1, 2}, {3, 4}, {5, 6}});
  CHECK(injection_sum<Rational>(z2, cols({0, 1})) == Rational(64));
  CHECK(injection_sum<Rational>(z2, cols({0, 1})) ==
        testing::oracle_injection_sum<Rational>(z2, cols({0, 1})));
}

TEST_CASE("injection sum identities for random shapes up to N=6") {
  for (int N = 1; N <= 6; ++N) {
    for (int n = 1; n <= N; ++n) {
      auto z = testing::random_rational(N, n, 1000u * N + n);
      auto cs = column_stats(z);
      Rational count(injection_count(N, n));
      CHECK(injection_sum<Rational>(z, cols({})) == count);
      for (int r = 0; r < n; ++r) {
        std::vector<int> one = {r};
        CHECK(injection_sum<Rational>(z, one) ==
              Rational(count * cs.mean[static_cast<std::size_t>(r)]));
      }
    }
  }
}

TEST_CASE("mean products") {
  auto z = make_rational_matrix({{1, 2}, {3, 4}, {5, 6}});
  auto cs = column_stats(z);
  CHECK(mean_product(cs.mean, cols({})) == Rational(1));
  CHECK(mean_product(cs.mean, cols({0, 1})) == Rational(12));
}

TEST_CASE("enumerators produce declared counts without duplicates") {
  CHECK(injection_count(6, 4) == 360);
  CHECK(binomial_mpz(10, 5) == 252);

  for (int N = 1; N <= 7; ++N) {
    for (int n = 1; n <= N; ++n) {
      std::set<std::vector<int>> seen;
      for_each_injection(N, n, [&](std::span<const int> j) {
        seen.insert(std::vector<int>(j.begin(), j.end()));
      });
      CHECK(mpz_class(seen.size()) == injection_count(N, n));
    }
    for (int k = 0; k <= N; ++k) {
      std::set<std::vector<int>> seen;
      for_each_subset(N, k, [&](std::span<const int> s) {
        seen.insert(std::vector<int>(s.begin(), s.end()));
      });
      CHECK(mpz_class(seen.size()) == binomial_mpz(N, k));
    }
  }
}

TEST_CASE("enumeration is lexicographic") {
  std::vector<std::vector<int>> inj;
  for_each_injection(3, 2, [&](std::span<const int> j) {
    inj.emplace_back(j.begin(), j.end());
  });
  std::vector<std::vector<int>> expect = {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}};
  CHECK(inj == expect);

  std::vector<std::vector<int>> subs;
  for_each_subset(3, 2, [&](std::span<const int> s) {
    subs.emplace_back(s.begin(), s.end());
  });
  std::vector<std::vector<int>> expect2 = {{0, 1}, {0, 2}, {1, 2}};
  CHECK(subs == expect2);

  CHECK_THROWS_AS(for_each_injection(2, 3, [](std::span<const int>) {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(for_each_subset(3, 4, [](std::span<const int>) {}),
                  std::invalid_argument);
}

TEST_CASE("matrix shape validation") {
  CHECK_THROWS_AS(RectMatrix<Rational>(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(RectMatrix<Rational>(1, 0), std::invalid_argument);
  CHECK_NOTHROW(RectMatrix<Rational>(3, 3));
}

TEST_CASE("extended reals follow the stated conventions") {
  ExtReal one(1.0);
  ExtReal zero(0.0);
  CHECK((one / zero).is_inf());                       // 1/0 = inf
  CHECK(ext_pow(zero, 0.0).value() == 1.0);           // 0^0 = 1
  CHECK(ext_pow(one, ExtReal::inf()).value() == 1.0); // 1^inf = 1
  CHECK(min(ExtReal(2.5), ExtReal::inf()).value() == 2.5);
  CHECK(max(ExtReal(2.5), ExtReal::inf()).is_inf());
  CHECK((ExtReal(2.0) * ExtReal(3.0)).value() == 6.0);
  CHECK((ExtReal(0.0) * ExtReal::inf()).value() == 0.0);
  CHECK_THROWS_AS(ExtReal(-1.0), std::invalid_argument);
}
