#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/matrix.hpp"
#include "permlab/permanent.hpp"

namespace permlab {

inline constexpr int kCoeffVarBudget = 12;  // 2^n coefficient table

/// Polynomial in n variables kept modulo squares: one coefficient per subset
/// of variables (bitmask index). Multiplication discards any monomial that
/// would repeat a variable, which is exactly what coefficient extraction at
/// the all-variables monomial needs: with every factor affine per variable,
/// monomials containing a square can never contribute to it.
template <class Scalar>
class MultilinearPoly {
 public:
  explicit MultilinearPoly(int num_vars)
      : num_vars_(num_vars),
        coeff_(std::size_t(1) << num_vars, Scalar(0)) {
    if (num_vars < 0 || num_vars > kCoeffVarBudget) {
      throw budget_error("MultilinearPoly: variable count exceeds table budget");
    }
  }

  static MultilinearPoly one(int num_vars) {
    MultilinearPoly p(num_vars);
    p.coeff_[0] = Scalar(1);
    return p;
  }

  int num_vars() const { return num_vars_; }
  const Scalar& coeff(std::uint32_t subset) const { return coeff_[subset]; }
  Scalar& coeff(std::uint32_t subset) { return coeff_[subset]; }

  /// In-place multiply by an affine factor c0 + sum_r linear[r] x_r.
  void multiply_affine(const Scalar& c0, std::span<const Scalar> linear) {
    const std::uint32_t size = std::uint32_t(1) << num_vars_;
    std::vector<Scalar> next(size, Scalar(0));
    for (std::uint32_t t = 0; t < size; ++t) {
      Scalar acc = Scalar(coeff_[t] * c0);
      for (int r = 0; r < num_vars_; ++r) {
        if (t >> r & 1u) {
          acc = Scalar(acc + linear[static_cast<std::size_t>(r)] * coeff_[t & ~(1u << r)]);
        }
      }
      next[t] = acc;
    }
    coeff_ = std::move(next);
  }

  /// Square-free product: (a*b)[T] = sum over splits of T into disjoint U, T\U.
  friend MultilinearPoly multiply(const MultilinearPoly& a, const MultilinearPoly& b) {
    MultilinearPoly out(a.num_vars_);
    const std::uint32_t size = std::uint32_t(1) << a.num_vars_;
    for (std::uint32_t t = 0; t < size; ++t) {
      Scalar acc = Scalar(0);
      // iterate subsets u of t
      std::uint32_t u = t;
      while (true) {
        acc = Scalar(acc + a.coeff_[u] * b.coeff_[t & ~u]);
        if (u == 0) break;
        u = (u - 1) & t;
      }
      out.coeff_[t] = acc;
    }
    return out;
  }

 private:
  int num_vars_;
  std::vector<Scalar> coeff_;
};

/// Square-free part of prod_j (1 + sum_r residual(j,r) x_r): entry at subset V
/// is the sum over injective row choices for the columns of V of the residual
/// products. This is the whole content of the coefficient extraction behind
/// the higher-order approximants.
template <class Scalar>
MultilinearPoly<Scalar> residual_poly(const RectMatrix<Scalar>& residual) {
  MultilinearPoly<Scalar> p = MultilinearPoly<Scalar>::one(residual.cols());
  std::vector<Scalar> row(static_cast<std::size_t>(residual.cols()));
  for (int j = 0; j < residual.rows(); ++j) {
    for (int r = 0; r < residual.cols(); ++r) row[static_cast<std::size_t>(r)] = residual(j, r);
    p.multiply_affine(Scalar(1), row);
  }
  return p;
}

/// First-order approximant: the product of the column means.
template <class Scalar>
Scalar h1(const RectMatrix<Scalar>& z) {
  ColumnStats<Scalar> cs = column_stats(z);
  Scalar p = Scalar(1);
  for (const Scalar& m : cs.mean) p = Scalar(p * m);
  return p;
}

/// The two-column correction term: sum over column pairs R of
/// (product of the other means) * sum_j prod_{r in R} residual(j,r).
template <class Scalar>
Scalar second_order_correction(const RectMatrix<Scalar>& z) {
  const int n = z.cols();
  if (n < 2) throw std::invalid_argument("second_order_correction requires n >= 2");
  ColumnStats<Scalar> cs = column_stats(z);
  Scalar total = Scalar(0);
  for (int r = 0; r < n; ++r) {
    for (int s = r + 1; s < n; ++s) {
      Scalar inner = Scalar(0);
      for (int j = 0; j < z.rows(); ++j) {
        inner = Scalar(inner + cs.residual(j, r) * cs.residual(j, s));
      }
      Scalar rest = Scalar(1);
      for (int t = 0; t < n; ++t) {
        if (t != r && t != s) rest = Scalar(rest * cs.mean[static_cast<std::size_t>(t)]);
      }
      total = Scalar(total + rest * inner);
    }
  }
  return total;
}

/// Second-order approximant, transcribed from its displayed formula.
/// Satisfies h2 = h1 - second_order_correction / (N (N-1)) exactly.
template <class Scalar>
Scalar h2(const RectMatrix<Scalar>& z) {
  const int n = z.cols();
  const int N = z.rows();
  if (n < 2) throw std::invalid_argument("h2 requires n >= 2");
  ColumnStats<Scalar> cs = column_stats(z);
  Scalar correction = Scalar(0);
  for (int r = 0; r < n; ++r) {
    for (int s = r + 1; s < n; ++s) {
      Scalar inner = Scalar(0);
      for (int j = 0; j < N; ++j) {
        inner = Scalar(inner + cs.residual(j, r) * cs.residual(j, s));
      }
      Scalar rest = Scalar(1);
      for (int t = 0; t < n; ++t) {
        if (t != r && t != s) rest = Scalar(rest * cs.mean[static_cast<std::size_t>(t)]);
      }
      correction = Scalar(correction + inner * rest);
    }
  }
  Scalar lead = Scalar(1);
  for (const Scalar& m : cs.mean) lead = Scalar(lead * m);
  return Scalar(lead - scale_ratio(correction, mpz_class(1),
                                   mpz_class(N) * mpz_class(N - 1)));
}

/// G_m: the coefficient of x_1...x_n in
///   (sum_r mean_r x_r)^(n-m) * prod_j (1 + sum_r residual(j,r) x_r),
/// scaled by (N-m)!/((n-m)! N!). The power factor contributes a square-free
/// degree-(n-m) monomial with multinomial weight (n-m)!, so the extraction
/// reduces to a subset convolution with the residual table at size-m subsets.
template <class Scalar>
Scalar g_term(const RectMatrix<Scalar>& z, int m) {
  const int n = z.cols();
  const int N = z.rows();
  if (m < 0 || m > n) throw std::invalid_argument("g_term: order out of range");
  if (n > kCoeffVarBudget) throw budget_error("g_term: coefficient table too large");

  ColumnStats<Scalar> cs = column_stats(z);
  MultilinearPoly<Scalar> table = residual_poly(cs.residual);

  Scalar acc = Scalar(0);
  const std::uint32_t full = (std::uint32_t(1) << n) - 1;
  for (std::uint32_t v = 0; v <= full; ++v) {
    if (std::popcount(v) != m) continue;
    Scalar rest = Scalar(1);
    for (int r = 0; r < n; ++r) {
      if (!(v >> r & 1u)) rest = Scalar(rest * cs.mean[static_cast<std::size_t>(r)]);
    }
    acc = Scalar(acc + table.coeff(v) * rest);
  }
  // (N-m)!/((n-m)! N!) times the (n-m)! multinomial weight
  return scale_ratio(acc, factorial_mpz(N - m), factorial_mpz(N));
}

/// H_ell = sum of G_m for m = 0..ell. H_1 is the mean product, H_2 the
/// second-order approximant, H_n the normalized permanent.
template <class Scalar>
Scalar h_approx(const RectMatrix<Scalar>& z, int ell) {
  const int n = z.cols();
  const int N = z.rows();
  if (ell < 1 || ell > n) throw std::invalid_argument("h_approx: order out of range");
  if (n > kCoeffVarBudget) throw budget_error("h_approx: coefficient table too large");

  ColumnStats<Scalar> cs = column_stats(z);
  MultilinearPoly<Scalar> table = residual_poly(cs.residual);

  Scalar total = Scalar(0);
  const std::uint32_t full = (std::uint32_t(1) << n) - 1;
  for (std::uint32_t v = 0; v <= full; ++v) {
    int m = std::popcount(v);
    if (m > ell) continue;
    Scalar rest = Scalar(1);
    for (int r = 0; r < n; ++r) {
      if (!(v >> r & 1u)) rest = Scalar(rest * cs.mean[static_cast<std::size_t>(r)]);
    }
    total = Scalar(total + scale_ratio(Scalar(table.coeff(v) * rest),
                                       factorial_mpz(N - m), factorial_mpz(N)));
  }
  return total;
}

}  // namespace permlab
