#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/matrix.hpp"

namespace permlab {

inline constexpr std::uint64_t kDefaultTermBudget = 10'000'000;

/// Permanent by direct enumeration of all injective column-to-row
/// assignments, in lexicographic order. Kept permanently as the oracle for
/// the other engines. Throws budget_error when the matrix has more than
/// `budget` summands.
template <class Scalar>
Scalar permanent_naive(const RectMatrix<Scalar>& z,
                       std::uint64_t budget = kDefaultTermBudget) {
  mpz_class terms = injection_count(z.rows(), z.cols());
  if (terms > mpz_class(static_cast<unsigned long>(budget))) {
    throw budget_error("permanent_naive: too large for naive enumeration");
  }
  const int n = z.cols();
  Scalar total = Scalar(0);
  for_each_injection(z.rows(), n, [&](std::span<const int> j) {
    Scalar p = Scalar(1);
    for (int r = 0; r < n; ++r) p = Scalar(p * z(j[static_cast<std::size_t>(r)], r));
    total = Scalar(total + p);
  });
  return total;
}

namespace detail {

/// Square case: Gray-code walk over nonempty row subsets keeping the column
/// sums incrementally up to date. One entry flips per step, documented order.
template <class Scalar>
Scalar ryser_square(const RectMatrix<Scalar>& z) {
  const int n = z.cols();
  std::vector<Scalar> colsum(static_cast<std::size_t>(n), Scalar(0));
  Scalar total = Scalar(0);
  std::uint64_t prev_gray = 0;
  const std::uint64_t end = std::uint64_t(1) << n;
  for (std::uint64_t k = 1; k < end; ++k) {
    std::uint64_t gray = k ^ (k >> 1);
    std::uint64_t flipped = gray ^ prev_gray;  // single bit
    int row = std::countr_zero(flipped);
    if (gray & flipped) {
      for (int r = 0; r < n; ++r) colsum[static_cast<std::size_t>(r)] =
          Scalar(colsum[static_cast<std::size_t>(r)] + z(row, r));
    } else {
      for (int r = 0; r < n; ++r) colsum[static_cast<std::size_t>(r)] =
          Scalar(colsum[static_cast<std::size_t>(r)] - z(row, r));
    }
    prev_gray = gray;
    Scalar prod = Scalar(1);
    for (int r = 0; r < n; ++r) prod = Scalar(prod * colsum[static_cast<std::size_t>(r)]);
    int card = std::popcount(gray);
    if ((n - card) % 2 == 0) {
      total = Scalar(total + prod);
    } else {
      total = Scalar(total - prod);
    }
  }
  return total;
}

}  // namespace detail

/// Permanent by the rectangular inclusion-exclusion formula
///   sum_{k=1..n} (-1)^(n-k) binom(N-k, n-k) sum_{|J|=k} prod_r (sum_{j in J} z_{j,r}),
/// transcribed as printed. The square case n = N uses a Gray-code subset
/// walk instead, where single-row flips update the column sums in place.
template <class Scalar>
Scalar permanent_ryser(const RectMatrix<Scalar>& z,
                       std::uint64_t budget = kDefaultTermBudget) {
  const int N = z.rows();
  const int n = z.cols();
  if (N > 62 || (std::uint64_t(1) << N) > budget) {
    throw budget_error("permanent_ryser: too large for subset enumeration");
  }
  if (n == N) return detail::ryser_square(z);

  Scalar total = Scalar(0);
  for (int k = 1; k <= n; ++k) {
    Scalar subtotal = Scalar(0);
    for_each_subset(N, k, [&](std::span<const int> rows) {
      Scalar prod = Scalar(1);
      for (int r = 0; r < n; ++r) {
        Scalar s = Scalar(0);
        for (int j : rows) s = Scalar(s + z(j, r));
        prod = Scalar(prod * s);
      }
      subtotal = Scalar(subtotal + prod);
    });
    Scalar weighted = scale_ratio(subtotal, binomial_mpz(N - k, n - k), mpz_class(1));
    if ((n - k) % 2 == 0) {
      total = Scalar(total + weighted);
    } else {
      total = Scalar(total - weighted);
    }
  }
  return total;
}

/// Permanent by whichever exact engine is cheaper for the shape.
template <class Scalar>
Scalar permanent(const RectMatrix<Scalar>& z,
                 std::uint64_t budget = kDefaultTermBudget) {
  mpz_class naive_terms = injection_count(z.rows(), z.cols());
  mpz_class ryser_terms = z.rows() < 62
      ? mpz_class(mpz_class(1) << z.rows())
      : naive_terms + 1;
  if (ryser_terms <= naive_terms) return permanent_ryser(z, budget);
  return permanent_naive(z, budget);
}

/// (N-n)!/N! Per(Z): the permanent divided by its number of summands.
template <class Scalar>
Scalar normalized_permanent(const RectMatrix<Scalar>& z,
                            std::uint64_t budget = kDefaultTermBudget) {
  Scalar per = permanent(z, budget);
  return scale_ratio(per, factorial_mpz(z.rows() - z.cols()), factorial_mpz(z.rows()));
}

/// All elementary symmetric polynomials e_0..e_m of the given values, by the
/// one-row dynamic-programming recurrence over prefixes.
template <class Scalar>
std::vector<Scalar> esp_all(std::span<const Scalar> values) {
  const std::size_t m = values.size();
  std::vector<Scalar> e(m + 1, Scalar(0));
  e[0] = Scalar(1);
  for (std::size_t i = 0; i < m; ++i) {
    // reverse order so each value enters every degree exactly once
    for (std::size_t k = i + 1; k >= 1; --k) {
      e[k] = Scalar(e[k] + values[i] * e[k - 1]);
    }
  }
  return e;
}

/// E_{A,k}: sum over k-subsets of the value list of their products.
/// Returns 1 for k = 0 and 0 for k < 0 or k > |A|.
template <class Scalar>
Scalar esp(std::span<const Scalar> values, int k) {
  if (k < 0 || k > static_cast<int>(values.size())) return Scalar(0);
  std::vector<Scalar> e = esp_all(values);
  return e[static_cast<std::size_t>(k)];
}

template <class Scalar>
Scalar esp(const std::vector<Scalar>& values, int k) {
  return esp(std::span<const Scalar>(values.data(), values.size()), k);
}

/// E_{A,n} / binom(|A|, n), the normalized elementary symmetric polynomial.
template <class Scalar>
Scalar normalized_esp(std::span<const Scalar> values, int n) {
  const int N = static_cast<int>(values.size());
  if (n < 1 || n > N) throw std::invalid_argument("normalized_esp: degree out of range");
  return scale_ratio(esp(values, n), mpz_class(1), binomial_mpz(N, n));
}

template <class Scalar>
Scalar normalized_esp(const std::vector<Scalar>& values, int n) {
  return normalized_esp(std::span<const Scalar>(values.data(), values.size()), n);
}

}  // namespace permlab
