#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "permlab/matrix.hpp"

namespace permlab {

/// splitmix64 step; the whole corpus derives from this one sequence so
/// every generated matrix is reproducible bit for bit.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Per-matrix seed for corpus element `index` under a master seed.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed ^ index;
  return splitmix64_next(s);
}

class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  /// Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [lo, hi] (inclusive).
  long next_range(long lo, long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next_u64() % span);
  }

 private:
  std::uint64_t state_;
};

/// 0-1 matrix with zeros exactly on the diagonal (all-ones minus identity).
/// Its permanent counts the fixed-point-free permutations.
inline RectMatrix<Rational> derangement_matrix(int n) {
  if (n < 2) throw std::invalid_argument("derangement_matrix requires n >= 2");
  RectMatrix<Rational> z(n, n);
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < n; ++r) z(j, r) = Rational(j == r ? 0 : 1);
  }
  return z;
}

/// n-th derangement number via the alternating factorial sum, evaluated in
/// exact rationals and returned as an integer.
inline mpz_class derangement_number(int n) {
  if (n < 0) throw std::invalid_argument("derangement_number requires n >= 0");
  Rational sum(0);
  for (int j = 0; j <= n; ++j) {
    Rational term = make_ratio(mpz_class(j % 2 == 0 ? 1 : -1), factorial_mpz(j));
    sum = Rational(sum + term);
  }
  Rational result = Rational(sum * Rational(factorial_mpz(n)));
  if (result.get_den() != 1) throw std::logic_error("derangement_number: not integral");
  return result.get_num();
}

/// 0-1 matrix with zeros on the diagonal and on the cyclic superdiagonal
/// (1,2),(2,3),...,(n,1). Its permanent is the n-th menage number.
inline RectMatrix<Rational> menage_matrix(int n) {
  if (n < 3) throw std::invalid_argument("menage_matrix requires n >= 3");
  RectMatrix<Rational> z(n, n);
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < n; ++r) {
      bool diag = (j == r);
      bool shifted = (r == (j + 1) % n);
      z(j, r) = Rational(diag || shifted ? 0 : 1);
    }
  }
  return z;
}

/// Touchard's alternating formula for the menage numbers. Each term is kept
/// as an exact rational (the leading ratio is not integral on its own) and
/// the total is asserted integral.
inline mpz_class menage_number_touchard(int n) {
  if (n < 3) throw std::invalid_argument("menage_number_touchard requires n >= 3");
  Rational sum(0);
  for (int j = 0; j <= n; ++j) {
    mpz_class mag = binomial_mpz(2 * n - j, j) * factorial_mpz(n - j);
    Rational term = make_ratio(mpz_class(2 * n) * mag, mpz_class(2 * n - j));
    if (j % 2 == 1) term = Rational(-term);
    sum = Rational(sum + term);
  }
  if (sum.get_den() != 1) throw std::logic_error("menage_number_touchard: not integral");
  return sum.get_num();
}

inline RectMatrix<Rational> random_rational_matrix(int rows, int cols,
                                                   std::uint64_t seed,
                                                   long den_bound = 10) {
  if (den_bound < 1) throw std::invalid_argument("denominator bound must be positive");
  RectMatrix<Rational> z(rows, cols);
  SplitMix rng(seed);
  for (int j = 0; j < rows; ++j) {
    for (int r = 0; r < cols; ++r) {
      long p = rng.next_range(-den_bound, den_bound);
      z(j, r) = make_ratio(p, den_bound);
    }
  }
  return z;
}

/// Complex entries uniform on the closed unit disc, by rejection from the
/// square [-1,1]^2.
inline RectMatrix<Complex> random_unit_disc_matrix(int rows, int cols,
                                                   std::uint64_t seed) {
  RectMatrix<Complex> z(rows, cols);
  SplitMix rng(seed);
  for (int j = 0; j < rows; ++j) {
    for (int r = 0; r < cols; ++r) {
      double re;
      double im;
      do {
        re = 2.0 * rng.next_unit() - 1.0;
        im = 2.0 * rng.next_unit() - 1.0;
      } while (re * re + im * im > 1.0);
      z(j, r) = Complex(re, im);
    }
  }
  return z;
}

/// Nonnegative rational entries, each column sorted in decreasing order.
inline RectMatrix<Rational> decreasing_columns_matrix(int rows, int cols,
                                                      std::uint64_t seed,
                                                      long den_bound = 10) {
  if (den_bound < 1) throw std::invalid_argument("denominator bound must be positive");
  RectMatrix<Rational> z(rows, cols);
  SplitMix rng(seed);
  std::vector<Rational> col(static_cast<std::size_t>(rows));
  for (int r = 0; r < cols; ++r) {
    for (int j = 0; j < rows; ++j) {
      col[static_cast<std::size_t>(j)] = make_ratio(rng.next_range(0, den_bound), den_bound);
    }
    std::sort(col.begin(), col.end(),
              [](const Rational& a, const Rational& b) { return a > b; });
    for (int j = 0; j < rows; ++j) z(j, r) = col[static_cast<std::size_t>(j)];
  }
  return z;
}

template <class Scalar>
RectMatrix<Scalar> identical_rows_matrix(int rows, const std::vector<Scalar>& row) {
  RectMatrix<Scalar> z(rows, static_cast<int>(row.size()));
  for (int j = 0; j < rows; ++j) {
    for (int r = 0; r < z.cols(); ++r) z(j, r) = row[static_cast<std::size_t>(r)];
  }
  return z;
}

template <class Scalar>
RectMatrix<Scalar> identical_columns_matrix(int cols, const std::vector<Scalar>& column) {
  RectMatrix<Scalar> z(static_cast<int>(column.size()), cols);
  for (int j = 0; j < z.rows(); ++j) {
    for (int r = 0; r < cols; ++r) z(j, r) = column[static_cast<std::size_t>(j)];
  }
  return z;
}

enum class FamilyKind {
  derangement,
  menage,
  random_unit_disc,
  random_rational,
  identical_rows,
  identical_columns,
  decreasing_columns,
};

/// Parameters for one generated matrix. The structural property of the kind
/// (0-1 pattern, unit disc, sortedness, ...) is checked after construction.
struct FamilySpec {
  FamilyKind kind = FamilyKind::random_rational;
  int rows = 1;
  int cols = 1;
  std::uint64_t seed = 0;
  long den_bound = 10;
  std::vector<Rational> profile;  // row/column template for the identical kinds
};

using MatrixVariant = std::variant<RectMatrix<Rational>, RectMatrix<Complex>>;

inline MatrixVariant random_matrix(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::derangement:
      return derangement_matrix(spec.cols);
    case FamilyKind::menage:
      return menage_matrix(spec.cols);
    case FamilyKind::random_unit_disc: {
      RectMatrix<Complex> z = random_unit_disc_matrix(spec.rows, spec.cols, spec.seed);
      for (int j = 0; j < z.rows(); ++j) {
        for (int r = 0; r < z.cols(); ++r) {
          if (std::norm(z(j, r)) > 1.0) throw std::logic_error("unit-disc violation");
        }
      }
      return z;
    }
    case FamilyKind::random_rational:
      return random_rational_matrix(spec.rows, spec.cols, spec.seed, spec.den_bound);
    case FamilyKind::identical_rows:
      return identical_rows_matrix(spec.rows, spec.profile);
    case FamilyKind::identical_columns:
      return identical_columns_matrix(spec.cols, spec.profile);
    case FamilyKind::decreasing_columns: {
      RectMatrix<Rational> z =
          decreasing_columns_matrix(spec.rows, spec.cols, spec.seed, spec.den_bound);
      for (int r = 0; r < z.cols(); ++r) {
        for (int j = 0; j + 1 < z.rows(); ++j) {
          if (z(j, r) < z(j + 1, r) || z(z.rows() - 1, r) < 0) {
            throw std::logic_error("decreasing-columns violation");
          }
        }
      }
      return z;
    }
  }
  throw std::invalid_argument("random_matrix: unknown family kind");
}

/// Closed-form reference statistics for the two worked 0-1 families.
/// theta and gamma are exact rationals (theta via its square); kappa_tilde
/// follows the families' closed forms, available from n = 4 (derangement)
/// resp. n = 5 (menage).
struct FamilyRefStats {
  Rational beta;
  Rational theta_sq;
  Rational gamma1;
  std::optional<double> kappa_tilde;
};

namespace detail {

inline double fact_pow(int k, int m) {
  // (k!)^(2/m); with m = 0 the base is 0! = 1 and the convention 1^inf = 1 applies
  if (m == 0) return 1.0;
  mpz_class f = factorial_mpz(k);
  return std::pow(f.get_d(), 2.0 / static_cast<double>(m));
}

}  // namespace detail

inline FamilyRefStats family_reference_stats(FamilyKind kind, int n) {
  FamilyRefStats out;
  if (kind == FamilyKind::derangement) {
    if (n < 2) throw std::invalid_argument("derangement reference stats require n >= 2");
    out.beta = make_ratio(mpz_class(n - 1) * (n - 1), mpz_class(n) * n);
    out.theta_sq = make_ratio(mpz_class(4), mpz_class(n) * n * mpz_class(n - 1) * (n - 1));
    out.gamma1 = make_ratio(n - 1, 2 * n - 1);
    if (n >= 4) {
      double num = (n - 4) * detail::fact_pow(n - 3, n - 3) / detail::fact_pow(n - 2, n - 2) + 2.0;
      out.kappa_tilde = num / (n - 2);
    }
    return out;
  }
  if (kind == FamilyKind::menage) {
    if (n < 3) throw std::invalid_argument("menage reference stats require n >= 3");
    out.beta = make_ratio(mpz_class(n - 2) * (n - 2), mpz_class(n) * n);
    // theta = sqrt(8 (n^2 + 4n - 20)) / (n (n-1)^(3/2))
    out.theta_sq = make_ratio(mpz_class(8) * (mpz_class(n) * n + 4 * n - 20),
                              mpz_class(n) * n * mpz_class(n - 1) * (n - 1) * (n - 1));
    out.gamma1 = make_ratio(n - 2, 2 * (n - 1));
    if (n >= 5) {
      double d2 = detail::fact_pow(n - 2, n - 2);
      double num = (n - 5) * detail::fact_pow(n - 4, n - 4) / d2 +
                   2.0 * detail::fact_pow(n - 3, n - 3) / d2 + 1.0;
      out.kappa_tilde = num / (n - 2);
    }
    return out;
  }
  throw std::invalid_argument("family_reference_stats: only the worked 0-1 families");
}

}  // namespace permlab
