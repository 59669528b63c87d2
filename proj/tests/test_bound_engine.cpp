#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "permlab/bounds.hpp"
#include "test_support.hpp"

using namespace permlab;

namespace {

double close(double a, double b, double tol = 1e-12) { return std::fabs(a - b) <= tol; }

}  // namespace

TEST_CASE("statistics on the derangement pattern, n = 4") {
  auto z = derangement_matrix(4);
  auto st = stats(z);
  CHECK(close(st.beta.value(), 9.0 / 16.0));
  CHECK(close(st.theta2.value(), 1.0 / 6.0));
  CHECK(close(st.gamma(1.0).value(), 3.0 / 7.0));
  CHECK(st.zero_one);
  CHECK(st.unit_disc);

  // exact rational counterparts
  CHECK(exact_beta(z) == make_ratio(9, 16));
  CHECK(exact_theta2_sq(z) == make_ratio(1, 36));
  CHECK(exact_gamma1(z) == make_ratio(3, 7));
  CHECK(exact_alpha(z) == make_ratio(3, 16));
}

TEST_CASE("statistics vanish on identical rows") {
  auto z = identical_rows_matrix<Rational>(5, {make_ratio(1, 2), make_ratio(1, 3),
                                               make_ratio(2, 3)});
  auto st = stats(z);
  CHECK(st.alpha.value() == 0.0);
  CHECK(st.theta2.value() == 0.0);
  CHECK(st.theta3.value() == 0.0);
  CHECK(st.theta4.value() == 0.0);
}

TEST_CASE("menage statistic, n = 6") {
  auto z = menage_matrix(6);
  auto st = stats(z);
  double expect = std::sqrt(8.0 * 40.0) / (6.0 * std::pow(5.0, 1.5));
  CHECK(close(st.theta2.value(), expect));
  CHECK(exact_theta2_sq(z) == family_reference_stats(FamilyKind::menage, 6).theta_sq);
}

TEST_CASE("kappa orders: value 1 at small n and exhaustive max above") {
  auto z2 = derangement_matrix(2);
  auto st2 = stats(z2);
  CHECK(st2.kappa2.value() == 1.0);
  CHECK(st2.kappa3.value() == 1.0);
  CHECK(st2.kappa4.value() == 1.0);

  auto z4 = derangement_matrix(4);
  auto st4 = stats(z4);
  CHECK(close(st4.kappa2.value(), 1.0));  // a 2x2 all-ones block survives
  CHECK(st4.kappa3.value() == 1.0);       // n <= nu
  // kappa_tilde closed form at n = 4 equals 1
  REQUIRE(st4.kappa_tilde.has_value());
  CHECK(close(st4.kappa_tilde->value(), 1.0, 1e-12));
}

TEST_CASE("first-order weight function") {
  CHECK(f_first(2, ExtReal(0.3), ExtReal(0.9)).value() == 1.0);
  CHECK(f_first(2, ExtReal(0.0), ExtReal(0.0)).value() == 1.0);  // 0^0 = 1
  CHECK(close(f_first(4, ExtReal(0.0), ExtReal(1.0)).value(), 3.0));
  CHECK(close(f_first(3, ExtReal(1.0), ExtReal(1.0)).value(), 3.0));
  CHECK_THROWS_AS(f_first(1, ExtReal(0.0), ExtReal(0.0)), std::invalid_argument);

  // sum form equals the closed form away from the diagonal
  SplitMix rng(777);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + static_cast<int>(rng.next_range(0, 8));
    double x1 = rng.next_unit();
    double x2 = rng.next_unit();
    if (std::fabs(x1 - x2) < 1e-3) continue;
    double sum = f_first(n, ExtReal(x1), ExtReal(x2)).value();
    double closed = f_first_closed(n, x1, x2);
    CHECK(std::fabs(sum - closed) <= 1e-12 * std::max(1.0, std::fabs(closed)));
  }
}

TEST_CASE("second-order weight functions") {
  CHECK(f_second3(2, ExtReal(0.4), ExtReal(0.7)).value() == 0.0);
  CHECK(g_second4(2, ExtReal(0.4), ExtReal(0.7)).value() == 0.0);
  CHECK(g_second4(3, ExtReal(0.4), ExtReal(0.7)).value() == 0.0);
  CHECK(close(f_second3(3, ExtReal(0.5), ExtReal(0.8)).value(), 4.0));
  CHECK(close(g_second4(4, ExtReal(0.5), ExtReal(0.8)).value(), 6.0));
}

TEST_CASE("second-order weights h_{k,n}") {
  CHECK(second_order_weight(3, 3) == make_ratio(2, 3));
  CHECK(second_order_weight(3, 4) == make_ratio(5, 12));
  for (int n = 3; n <= 8; ++n) {
    mpq_class expect(mpz_class(2 * n - 2), mpz_class(n) * (n - 1) * (n - 2));
    expect.canonicalize();
    CHECK(second_order_weight(n, n) == expect);
  }
  CHECK_THROWS_AS(second_order_weight(2, 4), std::invalid_argument);
  CHECK(close(h_kn(3, 4).value(), 5.0 / 12.0));
}

TEST_CASE("zeta is 0 at 0 and nondecreasing through k = 64") {
  CHECK(zeta_bregman(0).value() == 0.0);
  CHECK(close(zeta_bregman(1).value(), 1.0));
  CHECK(close(zeta_bregman(3).value(), std::cbrt(6.0)));
  double prev = 0.0;
  for (long k = 1; k <= 64; ++k) {
    double cur = zeta_bregman(k).value();
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("stable half-power ratio") {
  // value n/2 at the removable singularity
  CHECK(close(stable_half_power_ratio(5, 1.0).value(), 2.5));
  // agreement with the direct quotient away from 1
  for (double x : {0.0, 0.1, 0.5, 0.9, 0.99}) {
    for (int n = 2; n <= 7; ++n) {
      double direct = (1.0 - std::pow(x, n / 2.0)) / (1.0 - x);
      CHECK(close(stable_half_power_ratio(n, x).value(), direct, 1e-12));
    }
  }
}

TEST_CASE("first-order bounds on the derangement matrix, n = 4") {
  auto z = derangement_matrix(4);
  auto rep = bound_report(z);
  REQUIRE(rep.first.has_value());
  REQUIRE(rep.actual_error_first.has_value());

  // error |9/24 - (3/4)^4| = 0.05859375
  CHECK(close(rep.actual_error_first->value(), 0.05859375));
  REQUIRE(rep.first->bound_7465284.has_value());
  CHECK(rep.actual_error_first->value() <= rep.first->bound_7465284->value() + 1e-12);
  CHECK(rep.first->bound_7465284->value() <= 1.0 / 8.0 + 1e-12);
  // exact evaluation: f_4(3/4, 1)/48 = 5.0625/48
  CHECK(close(rep.first->bound_7465284->value(), 5.0625 / 48.0));
}

TEST_CASE("identical rows: every difference-based bound vanishes") {
  auto z = identical_rows_matrix<Rational>(5, {make_ratio(1, 2), make_ratio(1, 3)});
  auto rep = bound_report(z);
  REQUIRE(rep.first.has_value());
  CHECK(rep.first->bound_7465283.value() == 0.0);
  REQUIRE(rep.second.has_value());
  CHECK(rep.second->bound_5196573.value() == 0.0);
  CHECK(rep.actual_error_first->value() == 0.0);
  CHECK(rep.actual_error_second->value() == 0.0);
}

TEST_CASE("extended-real branch at beta = 1") {
  // with beta = 1 the 1/(1 - sqrt(beta)) branch is infinite and the min
  // picks n/2; the expression stays finite
  ExtReal sqrt_beta(1.0);
  ExtReal inv = sqrt_beta.value() < 1.0 ? ExtReal(1.0 / (1.0 - sqrt_beta.value()))
                                        : ExtReal::inf();
  ExtReal val = ExtReal(0.3) * min(ExtReal(4 / 2.0), inv);
  CHECK(close(val.value(), 0.6));
}

TEST_CASE("second-order bound at n = 2 is exactly zero") {
  for (int N = 2; N <= 5; ++N) {
    auto z = testing::random_rational(N, 2, 900u + N);
    auto rep = bound_report(z);
    REQUIRE(rep.second.has_value());
    CHECK(rep.second->bound_5196573.value() == 0.0);
    REQUIRE(rep.actual_error_second.has_value());
    CHECK(rep.actual_error_second->value() == 0.0);
  }
}

TEST_CASE("second-order bound dominates the error on unit-disc matrices") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    auto z = random_unit_disc_matrix(5, 4, derive_seed(0xBEEF, t));
    auto rep = bound_report(z);
    REQUIRE(rep.actual_error_second.has_value());
    CHECK(rep.actual_error_second->value() <=
          rep.second->bound_5196573.value() + 1e-10);
    CHECK(rep.actual_error_first->value() <=
          rep.first->bound_7465283.value() + 1e-10);
  }
}

TEST_CASE("esp distance bounds") {
  // values (1,-1), n=2: both the bound and the actual distance equal 1
  std::vector<Rational> pm = {Rational(1), Rational(-1)};
  auto eb = bound_esp<Rational>(pm, 2);
  CHECK(close(eb.bound_6521765.value(), 1.0));
  CHECK(close(eb.actual.value(), 1.0));
  CHECK(eb.actual.value() <= eb.bound_6521765.value() + 1e-12);

  // values (1,1,0), n=2: actual = bound = 1/9
  std::vector<Rational> vals = {Rational(1), Rational(1), Rational(0)};
  auto eb2 = bound_esp<Rational>(vals, 2);
  CHECK(close(eb2.actual.value(), 1.0 / 9.0));
  CHECK(eb2.actual.value() <= eb2.bound_6521765.value() + 1e-12);
  CHECK(eb2.bound_6521765.value() <= eb2.bound_6521766.value() + 1e-15);

  // constant values: zero on all sides
  std::vector<Rational> same = {make_ratio(1, 2), make_ratio(1, 2), make_ratio(1, 2)};
  auto eb3 = bound_esp<Rational>(same, 2);
  CHECK(eb3.bound_6521765.value() == 0.0);
  CHECK(eb3.actual.value() == 0.0);

  std::vector<Rational> big = {Rational(2), Rational(0)};
  CHECK_THROWS_AS(bound_esp<Rational>(big, 2), std::invalid_argument);

  // ordering of the pair on random unit-disc values
  for (std::uint64_t t = 0; t < 30; ++t) {
    auto zm = random_unit_disc_matrix(6, 1, derive_seed(0xE59, t));
    std::vector<Complex> v;
    for (int j = 0; j < 6; ++j) v.push_back(zm(j, 0));
    for (int n = 2; n <= 6; ++n) {
      auto b = bound_esp<Complex>(v, n);
      CHECK(b.actual.value() <= b.bound_6521765.value() + 1e-10);
      CHECK(b.bound_6521765.value() <= b.bound_6521766.value() + 1e-12);
    }
  }
}

TEST_CASE("hadamard-type inequality") {
  auto ones = identical_rows_matrix<Rational>(4, {Rational(1), Rational(1)});
  CHECK(check_hadamard(ones));  // equality case

  auto z = make_rational_matrix({{1, 2}, {3, 4}});
  CHECK(check_hadamard(z));  // 10 <= 2 sqrt(5) sqrt(10)

  for (std::uint64_t t = 0; t < 200; ++t) {
    int N = 2 + static_cast<int>(t % 5);
    int n = 1 + static_cast<int>(t % N);
    auto w = random_unit_disc_matrix(N, n, derive_seed(0x44AD, t));
    CHECK(check_hadamard(w));
  }
}

TEST_CASE("bregman-minc inequality") {
  // all-ones square: equality n! = n!
  for (int n = 2; n <= 6; ++n) {
    auto ones = identical_rows_matrix<Rational>(n, std::vector<Rational>(n, Rational(1)));
    CHECK(check_bregman_minc(ones));
  }
  CHECK(check_bregman_minc(derangement_matrix(4)));  // 9 vs zeta(3)-based bound
  CHECK(check_bregman_minc(menage_matrix(5)));       // 13

  auto bad = make_rational_matrix({{1, 2}, {3, 4}});
  CHECK_THROWS_AS(check_bregman_minc(bad), std::invalid_argument);
}

TEST_CASE("auxiliary inequalities") {
  auto rows = identical_rows_matrix<Rational>(4, {Rational(1), Rational(0)});
  CHECK(check_aux_inequalities(rows).all());

  auto der5 = derangement_matrix(5);
  auto aux = check_aux_inequalities(der5);
  CHECK(aux.all());
  // theta <= 2 N alpha/(N-1) is strict here: 0.1 vs 0.4
  auto st = stats(der5);
  CHECK(st.theta2.value() < 2.0 * 5 * st.alpha.value() / 4.0 - 1e-6);

  for (std::uint64_t t = 0; t < 50; ++t) {
    int N = 2 + static_cast<int>(t % 5);
    int n = 2 + static_cast<int>(t % N);
    if (n > N) n = N;
    auto z = random_unit_disc_matrix(N, n, derive_seed(0xAA17, t));
    CHECK(check_aux_inequalities(z).all());
  }
  for (std::uint64_t t = 0; t < 25; ++t) {
    auto z = testing::random_rational(5, 4, derive_seed(0xAA18, t));
    CHECK(check_aux_inequalities(z).alpha_identity);
    CHECK(check_aux_inequalities(z).theta_vs_alpha);
  }
}

TEST_CASE("stats dimension guard") {
  RectMatrix<Rational> big(13, 13);
  for (int j = 0; j < 13; ++j) {
    for (int r = 0; r < 13; ++r) big(j, r) = Rational((j * 13 + r) % 3);
  }
  CHECK_THROWS_AS(stats(big), budget_error);
  StatsBudget loose;
  loose.max_dim_theta = 13;
  CHECK_NOTHROW(stats(big, loose));
}

TEST_CASE("chain monotonicity on unit-disc matrices") {
  for (std::uint64_t t = 0; t < 40; ++t) {
    int N = 2 + static_cast<int>(t % 6);
    int n = 2 + static_cast<int>(t % N);
    if (n > N) n = N;
    auto z = random_unit_disc_matrix(N, n, derive_seed(0xC4A1, t));
    auto rep = bound_report(z);
    REQUIRE(rep.first.has_value());
    const auto& b = *rep.first;
    REQUIRE(b.bound_739065.has_value());
    CHECK(b.bound_7465283.value() <= b.bound_739065->value() + 1e-12);
    CHECK(b.bound_739065->value() <= b.bound_514385->value() + 1e-12);
    CHECK(b.bound_514385->value() <= b.bound_627867->value() + 1e-12);
  }
}
