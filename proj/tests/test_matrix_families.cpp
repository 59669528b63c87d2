#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "permlab/bounds.hpp"
#include "permlab/families.hpp"
#include "permlab/permanent.hpp"
#include "test_support.hpp"

using namespace permlab;

namespace {

/// Derangement count by walking every permutation; independent of both the
/// permanent engines and the closed form.
long brute_derangements(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  long count = 0;
  do {
    bool fixed = false;
    for (int i = 0; i < n; ++i) {
      if (perm[static_cast<std::size_t>(i)] == i) {
        fixed = true;
        break;
      }
    }
    if (!fixed) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

long brute_menage(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  long count = 0;
  do {
    bool banned = false;
    for (int i = 0; i < n; ++i) {
      int p = perm[static_cast<std::size_t>(i)];
      if (p == i || p == (i + 1) % n) {
        banned = true;
        break;
      }
    }
    if (!banned) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace

TEST_CASE("derangement matrix construction") {
  auto z2 = derangement_matrix(2);
  CHECK(z2 == make_rational_matrix({{0, 1}, {1, 0}}));

  auto z3 = derangement_matrix(3);
  for (int j = 0; j < 3; ++j) {
    Rational rowsum(0);
    for (int r = 0; r < 3; ++r) rowsum = Rational(rowsum + z3(j, r));
    CHECK(rowsum == Rational(2));
  }
  CHECK(column_stats(derangement_matrix(5)).mean[0] == make_ratio(4, 5));
  CHECK_THROWS_AS(derangement_matrix(1), std::invalid_argument);
}

TEST_CASE("derangement numbers") {
  CHECK(derangement_number(0) == 1);
  CHECK(derangement_number(1) == 0);
  CHECK(derangement_number(4) == 9);
  CHECK(derangement_number(6) == 265);
  for (int n = 2; n <= 7; ++n) {
    CHECK(derangement_number(n) == brute_derangements(n));
  }
}

TEST_CASE("permanent of the derangement matrix matches the closed form") {
  for (int n = 2; n <= 9; ++n) {
    CHECK(permanent_ryser(derangement_matrix(n)) == Rational(derangement_number(n)));
  }
}

TEST_CASE("menage matrix construction") {
  auto z3 = menage_matrix(3);
  CHECK(z3 == make_rational_matrix({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}));
  auto z4 = menage_matrix(4);
  for (int j = 0; j < 4; ++j) {
    Rational rowsum(0);
    for (int r = 0; r < 4; ++r) rowsum = Rational(rowsum + z4(j, r));
    CHECK(rowsum == Rational(2));
  }
  CHECK(column_stats(menage_matrix(6)).mean[0] == make_ratio(4, 6));
  CHECK_THROWS_AS(menage_matrix(2), std::invalid_argument);
}

TEST_CASE("menage numbers by Touchard's formula") {
  CHECK(menage_number_touchard(3) == 1);
  CHECK(menage_number_touchard(4) == 2);
  CHECK(menage_number_touchard(5) == 13);
  for (int n = 3; n <= 7; ++n) {
    CHECK(menage_number_touchard(n) == brute_menage(n));
  }
  for (int n = 3; n <= 9; ++n) {
    CHECK(permanent_ryser(menage_matrix(n)) == Rational(menage_number_touchard(n)));
  }
  CHECK_THROWS_AS(menage_number_touchard(2), std::invalid_argument);
}

TEST_CASE("column scalar products of the worked families") {
  for (int n = 4; n <= 8; ++n) {
    auto d = derangement_matrix(n);
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        if (s == r) continue;
        Rational dot(0);
        for (int u = 0; u < n; ++u) dot = Rational(dot + d(u, r) * d(u, s));
        CHECK(dot == Rational(n - 2));
      }
    }
    auto m = menage_matrix(n);
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        if (s == r) continue;
        Rational dot(0);
        for (int u = 0; u < n; ++u) dot = Rational(dot + m(u, r) * m(u, s));
        bool adjacent = (s == (r + 1) % n) || (r == (s + 1) % n);
        CHECK(dot == Rational(adjacent ? n - 3 : n - 4));
      }
    }
  }
}

TEST_CASE("closed-form family statistics match the measured ones") {
  for (int n = 2; n <= 9; ++n) {
    auto ref = family_reference_stats(FamilyKind::derangement, n);
    auto z = derangement_matrix(n);
    CHECK(ref.beta == exact_beta(z));
    CHECK(ref.theta_sq == exact_theta2_sq(z));
    CHECK(ref.gamma1 == exact_gamma1(z));
    if (n >= 4) {
      auto st = stats(z);
      REQUIRE(st.kappa_tilde.has_value());
      REQUIRE(ref.kappa_tilde.has_value());
      CHECK(std::fabs(st.kappa_tilde->value() - *ref.kappa_tilde) <= 1e-12);
    }
  }
  for (int n = 3; n <= 9; ++n) {
    auto ref = family_reference_stats(FamilyKind::menage, n);
    auto z = menage_matrix(n);
    CHECK(ref.beta == exact_beta(z));
    CHECK(ref.theta_sq == exact_theta2_sq(z));
    CHECK(ref.gamma1 == exact_gamma1(z));
    if (n >= 5) {
      auto st = stats(z);
      REQUIRE(st.kappa_tilde.has_value());
      REQUIRE(ref.kappa_tilde.has_value());
      CHECK(std::fabs(st.kappa_tilde->value() - *ref.kappa_tilde) <= 1e-12);
    }
  }
  // spot values: derangement gamma(4) = 3/7, theta(6) = 1/15
  CHECK(family_reference_stats(FamilyKind::derangement, 4).gamma1 == make_ratio(3, 7));
  CHECK(family_reference_stats(FamilyKind::derangement, 6).theta_sq == make_ratio(1, 225));
  CHECK_THROWS_AS(family_reference_stats(FamilyKind::menage, 2), std::invalid_argument);
}

TEST_CASE("seeded generation is deterministic") {
  auto a = random_rational_matrix(5, 3, 42);
  auto b = random_rational_matrix(5, 3, 42);
  CHECK(a == b);
  auto c = random_unit_disc_matrix(4, 2, 42);
  auto d = random_unit_disc_matrix(4, 2, 42);
  CHECK(c == d);
  auto e = random_rational_matrix(5, 3, 43);
  CHECK(!(a == e));
}

TEST_CASE("unit-disc entries stay inside the disc") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    auto z = random_unit_disc_matrix(6, 4, derive_seed(7, t));
    for (int j = 0; j < 6; ++j) {
      for (int r = 0; r < 4; ++r) CHECK(std::norm(z(j, r)) <= 1.0);
    }
  }
}

TEST_CASE("rational entries honor the denominator bound") {
  auto z = random_rational_matrix(6, 4, 99, 10);
  for (int j = 0; j < 6; ++j) {
    for (int r = 0; r < 4; ++r) {
      CHECK(z(j, r).get_den() <= 10);
      CHECK(abs(z(j, r)) <= 1);
    }
  }
}

TEST_CASE("decreasing-columns matrices decrease") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    auto z = decreasing_columns_matrix(6, 3, derive_seed(13, t));
    for (int r = 0; r < 3; ++r) {
      for (int j = 0; j + 1 < 6; ++j) CHECK(z(j, r) >= z(j + 1, r));
      CHECK(z(5, r) >= 0);
    }
  }
}

TEST_CASE("family spec dispatcher") {
  FamilySpec spec;
  spec.kind = FamilyKind::random_unit_disc;
  spec.rows = 4;
  spec.cols = 3;
  spec.seed = 5;
  auto v = random_matrix(spec);
  CHECK(std::holds_alternative<RectMatrix<Complex>>(v));

  spec.kind = FamilyKind::derangement;
  spec.cols = 4;
  auto w = random_matrix(spec);
  CHECK(std::get<RectMatrix<Rational>>(w) == derangement_matrix(4));

  spec.kind = FamilyKind::identical_rows;
  spec.rows = 5;
  spec.profile = {Rational(1), make_ratio(1, 2)};
  auto u = random_matrix(spec);
  CHECK(std::get<RectMatrix<Rational>>(u).rows() == 5);
}

TEST_CASE("per-matrix seed derivation") {
  CHECK(derive_seed(100, 1) != derive_seed(100, 2));
  CHECK(derive_seed(100, 1) == derive_seed(100, 1));
  std::uint64_t s = 100 ^ 1;
  CHECK(derive_seed(100, 1) == splitmix64_next(s));
}
