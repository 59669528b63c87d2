#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "permlab/approximants.hpp"
#include "test_support.hpp"

using namespace permlab;

TEST_CASE("first-order approximant is the mean product") {
  auto z = make_rational_matrix({{1, 2}, {3, 4}, {5, 6}});
  CHECK(h1(z) == Rational(12));

  auto rows = identical_rows_matrix<Rational>(5, {make_ratio(1, 2), make_ratio(2, 3)});
  CHECK(h1(rows) == normalized_permanent(rows));

  auto z1 = testing::random_rational(4, 1, 11);
  CHECK(h1(z1) == column_stats(z1).mean[0]);
}

TEST_CASE("second-order approximant: hand-checked values") {
  auto rows = identical_rows_matrix<Rational>(4, {Rational(1), Rational(2), Rational(3)});
  CHECK(h2(rows) == h1(rows));  // all residuals vanish

  // Z = [[0,1],[1,0]]: H2 = 1/4 - (1/2)(-1/2) = 1/2 = normalized permanent
  auto z = make_rational_matrix({{0, 1}, {1, 0}});
  CHECK(h2(z) == make_ratio(1, 2));
  CHECK(h2(z) == normalized_permanent(z));

  // n = N = 2: H2 = H_n is exact for any matrix
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    auto w = testing::random_rational(2, 2, seed);
    CHECK(h2(w) == normalized_permanent(w));
  }

  auto z1 = testing::random_rational(3, 1, 24);
  CHECK_THROWS_AS(h2(z1), std::invalid_argument);
}

TEST_CASE("two-column correction term") {
  auto rows = identical_rows_matrix<Rational>(4, {Rational(1), Rational(2)});
  CHECK(second_order_correction(rows) == Rational(0));

  auto z = make_rational_matrix({{0, 1}, {1, 0}});
  CHECK(second_order_correction(z) == make_ratio(-1, 2));

  // h2 = h1 - correction/(N(N-1)) exactly, 100 random matrices
  for (int t = 0; t < 100; ++t) {
    int N = 2 + t % 4;
    int n = 2 + t % (N - 1 > 1 ? N - 1 : 1);
    if (n > N) n = N;
    auto w = testing::random_rational(N, n, derive_seed(31, static_cast<unsigned>(t)));
    Rational expect =
        Rational(h1(w) - scale_ratio(second_order_correction(w), mpz_class(1),
                                     mpz_class(N) * (N - 1)));
    CHECK(h2(w) == expect);
  }
}

TEST_CASE("coefficient-extraction terms") {
  // G_0 + G_1 = H_1 (the m = 1 term vanishes because residuals sum to zero)
  for (std::uint64_t seed : {41u, 42u}) {
    auto z = testing::random_rational(4, 3, seed);
    CHECK(Rational(g_term(z, 0) + g_term(z, 1)) == h1(z));
    CHECK(g_term(z, 1) == Rational(0));
  }

  // identical rows: every order above zero dies with the residuals
  auto rows = identical_rows_matrix<Rational>(5, {Rational(1), make_ratio(1, 2), Rational(2)});
  CHECK(g_term(rows, 1) == Rational(0));
  CHECK(g_term(rows, 2) == Rational(0));

  // the G_m sum telescopes to the normalized permanent
  for (int N = 2; N <= 5; ++N) {
    for (int n = 2; n <= N; ++n) {
      auto z = testing::random_rational(N, n, 4000u + 10u * N + n);
      Rational total(0);
      for (int m = 0; m <= n; ++m) total = Rational(total + g_term(z, m));
      CHECK(total == normalized_permanent(z));
    }
  }

  auto z = testing::random_rational(3, 2, 43);
  CHECK_THROWS_AS(g_term(z, 3), std::invalid_argument);
  CHECK_THROWS_AS(g_term(z, -1), std::invalid_argument);
}

TEST_CASE("partial sums of the expansion") {
  for (int N = 2; N <= 5; ++N) {
    for (int n = 1; n <= N; ++n) {
      auto z = testing::random_rational(N, n, 5000u + 10u * N + n);
      CHECK(h_approx(z, 1) == h1(z));
      if (n >= 2) CHECK(h_approx(z, 2) == h2(z));
      CHECK(h_approx(z, n) == normalized_permanent(z));
    }
  }
  auto z = testing::random_rational(3, 2, 51);
  CHECK_THROWS_AS(h_approx(z, 0), std::invalid_argument);
  CHECK_THROWS_AS(h_approx(z, 3), std::invalid_argument);
}

TEST_CASE("multilinear coefficient of the full monomial is a permanent") {
  for (int n = 2; n <= 5; ++n) {
    auto z = testing::random_rational(n, n, 6000u + n);
    MultilinearPoly<Rational> p = MultilinearPoly<Rational>::one(n);
    std::vector<Rational> row(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      for (int r = 0; r < n; ++r) row[static_cast<std::size_t>(r)] = z(j, r);
      p.multiply_affine(Rational(1), row);
    }
    std::uint32_t full = (std::uint32_t(1) << n) - 1;
    CHECK(p.coeff(full) == permanent_naive(z));
  }
}

TEST_CASE("square-free polynomial product") {
  // (1 + x0)(1 + x1) = 1 + x0 + x1 + x0 x1, then squaring drops repeats
  MultilinearPoly<Rational> a(2);
  a.coeff(0) = Rational(1);
  a.coeff(1) = Rational(2);  // 2 x0
  MultilinearPoly<Rational> b(2);
  b.coeff(0) = Rational(3);
  b.coeff(2) = Rational(5);  // 5 x1
  auto c = multiply(a, b);
  CHECK(c.coeff(0) == Rational(3));
  CHECK(c.coeff(1) == Rational(6));
  CHECK(c.coeff(2) == Rational(5));
  CHECK(c.coeff(3) == Rational(10));

  // x0 * x0 would need a square: it is discarded
  auto d = multiply(a, a);
  CHECK(d.coeff(1) == Rational(4));  // cross terms 2*(1*2x0)
  CHECK(d.coeff(0) == Rational(1));
}

TEST_CASE("float domain approximants track the rational ones") {
  auto zq = testing::random_rational(5, 3, 61);
  auto zc = to_complex(zq);
  CHECK(std::abs(h1(zc) - Complex(h1(zq).get_d(), 0)) < 1e-12);
  CHECK(std::abs(h2(zc) - Complex(h2(zq).get_d(), 0)) < 1e-12);
  CHECK(std::abs(h_approx(zc, 3) - Complex(h_approx(zq, 3).get_d(), 0)) < 1e-12);
}
