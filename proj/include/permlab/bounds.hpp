#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "permlab/approximants.hpp"
#include "permlab/ext_real.hpp"
#include "permlab/permanent.hpp"
#include "permlab/stats.hpp"

namespace permlab {

/// First-order weight sum: sum_{k=2..n} (k-1) x1^(n-k) x2^(k-2), always
/// evaluated as the sum (0^0 = 1), never the closed rational form, so it is
/// stable at x1 = x2. Requires n >= 2.
inline ExtReal f_first(int n, ExtReal x1, ExtReal x2) {
  if (n < 2) throw std::invalid_argument("f_first requires n >= 2");
  ExtReal acc(0.0);
  for (int k = 2; k <= n; ++k) {
    ExtReal term = ExtReal(static_cast<double>(k - 1)) *
                   ext_pow(x1, static_cast<double>(n - k)) *
                   ext_pow(x2, static_cast<double>(k - 2));
    acc = acc + term;
  }
  return acc;
}

/// Closed rational form ((n-1)x2^n - n x1 x2^(n-1) + x1^n)/(x2-x1)^2;
/// cross-checked against the sum form in tests, undefined at x1 = x2.
inline double f_first_closed(int n, double x1, double x2) {
  double num = (n - 1) * std::pow(x2, n) - n * x1 * std::pow(x2, n - 1) + std::pow(x1, n);
  double d = x2 - x1;
  return num / (d * d);
}

/// Second-order triple-term weight sum over k in {3..n}; empty (0) at n = 2.
inline ExtReal f_second3(int n, ExtReal x1, ExtReal x2) {
  if (n < 2) throw std::invalid_argument("f_second3 requires n >= 2");
  ExtReal acc(0.0);
  for (int k = 3; k <= n; ++k) {
    ExtReal term = ExtReal(static_cast<double>((n + k - 2) * (n - k + 1))) *
                   ext_pow(x1, static_cast<double>(n - k)) *
                   ext_pow(x2, static_cast<double>(k - 3));
    acc = acc + term;
  }
  return acc;
}

/// Second-order quadruple-term weight sum over k in {4..n}; empty at n <= 3.
inline ExtReal g_second4(int n, ExtReal x1, ExtReal x2) {
  if (n < 2) throw std::invalid_argument("g_second4 requires n >= 2");
  ExtReal acc(0.0);
  for (int k = 4; k <= n; ++k) {
    ExtReal term = ExtReal(static_cast<double>((k - 3) * (n + k - 2) * (n - k + 1))) *
                   ext_pow(x1, static_cast<double>(n - k)) *
                   ext_pow(x2, static_cast<double>(k - 4));
    acc = acc + term;
  }
  return acc;
}

/// Exact rational second-order weight as an extended real.
inline ExtReal h_kn(int k, int n) {
  mpq_class q = second_order_weight(k, n);
  return ExtReal(q.get_d());
}

/// (1 - x^(n/2)) / (1 - x) evaluated through the stable rewriting
/// sum_{m=0..n-1} x^(m/2) / (1 + sqrt x), which gives n/2 at x = 1.
inline ExtReal stable_half_power_ratio(int n, double x) {
  if (x < 0.0) throw std::invalid_argument("stable_half_power_ratio: x must be >= 0");
  double s = std::sqrt(x);
  double acc = 0.0;
  double p = 1.0;  // s^m
  for (int m = 0; m < n; ++m) {
    acc += p;
    p *= s;
  }
  return ExtReal(acc / (1.0 + s));
}

struct FirstOrderBounds {
  ExtReal bound_7465283;                      // (theta2/2N) f_first(sqrt beta, sqrt kappa2)
  std::optional<ExtReal> bound_7465284;       // 0-1 matrices, min(kappa2, kappa_tilde)
  std::optional<ExtReal> bound_739065;        // chain bounds: need |z| <= 1
  std::optional<ExtReal> bound_514385;
  std::optional<ExtReal> bound_627867;
  std::optional<ExtReal> bound_bobkov16;      // legacy comparators: need |z| <= 1
  std::optional<ExtReal> bound_roos357;
  std::optional<ExtReal> bound_roos_halfgamma;
};

struct SecondOrderBounds {
  ExtReal bound_5196573;                      // theta3/theta4 combination
  std::optional<ExtReal> bound_4176439;       // legacy, |z| <= 1, inf when gamma >= 1
  std::optional<ExtReal> bound_roos_general;  // order-2 instance of the general-ell bound
};

/// Everything the harness serializes: statistics, bound values, and the
/// actual approximation errors whenever the exact permanent fits the budget.
struct BoundReport {
  MatrixStats stats;
  std::optional<FirstOrderBounds> first;
  std::optional<SecondOrderBounds> second;
  std::optional<Complex> norm_perm;  // exact value, as a complex double
  std::optional<double> h1_abs;
  std::optional<double> h2_abs;
  std::optional<ExtReal> actual_error_first;
  std::optional<ExtReal> actual_error_second;
};

namespace detail {

template <class S>
Complex to_complex_value(const S& x) {
  if constexpr (scalar_traits<S>::is_exact) {
    return Complex(x.get_d(), 0.0);
  } else {
    return x;
  }
}

}  // namespace detail

/// Statistics plus the exact normalized permanent and approximant errors
/// (omitted when the permanent exceeds the budget).
template <class S>
BoundReport make_bound_report(const RectMatrix<S>& z,
                              std::uint64_t perm_budget = kDefaultTermBudget,
                              StatsBudget sb = {}) {
  BoundReport rep;
  rep.stats = stats(z, sb);
  try {
    S per_norm = normalized_permanent(z, perm_budget);
    S first = h1(z);
    rep.norm_perm = detail::to_complex_value(per_norm);
    rep.h1_abs = scalar_traits<S>::abs_double(first);
    rep.actual_error_first = ExtReal(scalar_traits<S>::abs_double(S(per_norm - first)));
    if (z.cols() >= 2) {
      S second = h2(z);
      rep.h2_abs = scalar_traits<S>::abs_double(second);
      rep.actual_error_second = ExtReal(scalar_traits<S>::abs_double(S(per_norm - second)));
    }
  } catch (const budget_error&) {
    // bounds remain available without the exact reference values
  }
  return rep;
}

/// First-order bound block. Chain and legacy comparators apply only to
/// unit-disc matrices and are left unset otherwise; the 0-1 variant is set
/// only for 0-1 matrices. Requires n >= 2.
template <class S>
void bound_first_order(const RectMatrix<S>& z, BoundReport& rep) {
  const int N = z.rows();
  const int n = z.cols();
  if (n < 2) throw std::invalid_argument("bound_first_order requires n >= 2");
  const MatrixStats& st = rep.stats;
  FirstOrderBounds b;

  ExtReal sqrt_beta = ext_pow(st.beta, 0.5);
  ExtReal scale = st.theta2 / ExtReal(2.0 * N);
  b.bound_7465283 = scale * f_first(n, sqrt_beta, ext_pow(st.kappa2, 0.5));
  if (st.zero_one && st.kappa_tilde) {
    ExtReal kmin = min(st.kappa2, *st.kappa_tilde);
    b.bound_7465284 = scale * f_first(n, sqrt_beta, ext_pow(kmin, 0.5));
  }
  if (st.unit_disc) {
    ExtReal ratio = stable_half_power_ratio(n, sqrt_beta.value());
    b.bound_739065 = ExtReal(static_cast<double>(n - 1) / (2.0 * N)) * st.theta2 * ratio;
    ExtReal inv = sqrt_beta.value() < 1.0
                      ? ExtReal(1.0 / (1.0 - sqrt_beta.value()))
                      : ExtReal::inf();
    b.bound_514385 = ExtReal(static_cast<double>(n - 1) / (N - 1)) * st.alpha *
                     min(ExtReal(n / 2.0), inv);
    b.bound_627867 = ExtReal((1.0 + sqrt_beta.value()) * (n - 1) / (N - 1));
    b.bound_bobkov16 = ExtReal(16.0 * n / N);
    ExtReal gamma1 = st.gamma(1.0);
    b.bound_roos357 = ExtReal(3.57) * gamma1;
    if (gamma1.value() < 1.0) {
      double g = gamma1.value();
      b.bound_roos_halfgamma =
          st.gamma(0.5) +
          ExtReal(2.12 * std::pow(g, 1.5) / std::pow(1.0 - g, 0.75));
    } else {
      b.bound_roos_halfgamma = ExtReal::inf();
    }
  }
  rep.first = b;
}

/// Second-order bound block; the legacy comparators again need |z| <= 1 and
/// become infinite once gamma reaches 1. Requires n >= 2.
template <class S>
void bound_second_order(const RectMatrix<S>& z, BoundReport& rep) {
  const int N = z.rows();
  const int n = z.cols();
  if (n < 2) throw std::invalid_argument("bound_second_order requires n >= 2");
  using T = scalar_traits<S>;
  const MatrixStats& st = rep.stats;
  SecondOrderBounds b;

  ExtReal sqrt_beta = ext_pow(st.beta, 0.5);
  ExtReal n2 = ExtReal(static_cast<double>(N) * N);
  b.bound_5196573 =
      st.theta3 / (ExtReal(2.0) * n2) * f_second3(n, sqrt_beta, ext_pow(st.kappa3, 0.5)) +
      st.theta4 / (ExtReal(8.0) * n2) * g_second4(n, sqrt_beta, ext_pow(st.kappa4, 0.5));

  if (st.unit_disc) {
    // sqrt(3) sum_j ((1/N^2) row residual norm * min(n/3, 1/(1-beta)))^(3/2)
    ColumnStats<S> cs = column_stats(z);
    double branch;
    if (st.beta.value() < 1.0) {
      branch = std::min(n / 3.0, 1.0 / (1.0 - st.beta.value()));
    } else {
      branch = n / 3.0;
    }
    double acc = 0.0;
    for (int j = 0; j < N; ++j) {
      double row = 0.0;
      for (int r = 0; r < n; ++r) row += T::to_double(T::norm_sq(cs.residual(j, r)));
      acc += std::pow(row / (static_cast<double>(N) * N) * branch, 1.5);
    }
    ExtReal gamma1 = st.gamma(1.0);
    if (gamma1.value() < 1.0) {
      double g = gamma1.value();
      b.bound_4176439 = ExtReal(std::sqrt(3.0) * acc +
                                2.27 * g * g / std::pow(1.0 - g, 0.75));
      // general-order comparator at order 2: (l+1)^(1/4) C~_{l+1} g^{3/2}/(1-g)^{3/4}
      double c3 = std::sqrt(std::exp(3.0) * 6.0 / std::pow(3.0, 3.5));
      b.bound_roos_general = ExtReal(std::pow(3.0, 0.25) * c3 * std::pow(g, 1.5) /
                                     std::pow(1.0 - g, 0.75));
    } else {
      b.bound_4176439 = ExtReal::inf();
      b.bound_roos_general = ExtReal::inf();
    }
  }
  rep.second = b;
}

template <class S>
BoundReport bound_report(const RectMatrix<S>& z, bool first_order = true,
                         bool second_order = true,
                         std::uint64_t perm_budget = kDefaultTermBudget,
                         StatsBudget sb = {}) {
  BoundReport rep = make_bound_report(z, perm_budget, sb);
  if (first_order) bound_first_order(z, rep);
  if (second_order) bound_second_order(z, rep);
  return rep;
}

struct EspBounds {
  ExtReal bound_6521765;  // f_first-weighted squared-distance bound
  ExtReal bound_6521766;  // its simple majorant; never below the first
  ExtReal actual;         // |normalized ESP - mean^n|
};

/// Distance bounds between the normalized degree-n ESP of unit-disc values
/// and the n-th power of their mean.
template <class S>
EspBounds bound_esp(std::span<const S> values, int n) {
  using T = scalar_traits<S>;
  const int N = static_cast<int>(values.size());
  if (n < 2 || n > N) throw std::invalid_argument("bound_esp: need 2 <= n <= N");
  for (const S& v : values) {
    if (T::to_double(T::norm_sq(v)) > 1.0) {
      throw std::invalid_argument("bound_esp: modulus above 1");
    }
  }
  S mean = S(0);
  for (const S& v : values) mean = S(mean + v);
  mean = scale_ratio(mean, mpz_class(1), mpz_class(N));
  double mean_abs = T::abs_double(mean);

  double dist_sq = 0.0;
  for (const S& v : values) dist_sq += T::to_double(T::norm_sq(S(v - mean)));

  double kappa = 1.0;
  if (n >= 3) {
    double best = 0.0;
    for (int u = 0; u < N; ++u) {
      for (int v = 0; v < N; ++v) {
        if (v == u) continue;
        double sum = 0.0;
        for (int j = 0; j < N; ++j) {
          if (j == u || j == v) continue;
          sum += T::to_double(T::norm_sq(values[static_cast<std::size_t>(j)]));
        }
        best = std::max(best, sum);
      }
    }
    kappa = best / (N - 2);
  }

  EspBounds out{ExtReal(0.0), ExtReal(0.0), ExtReal(0.0)};
  double nn1 = static_cast<double>(N) * (N - 1);
  out.bound_6521765 =
      f_first(n, ExtReal(mean_abs), ext_pow(ExtReal(kappa), 0.5)) * ExtReal(dist_sq / nn1);
  ExtReal inv = mean_abs < 1.0 ? ExtReal(1.0 / (n * (1.0 - mean_abs))) : ExtReal::inf();
  out.bound_6521766 = ExtReal(static_cast<double>(n) * (n - 1) / nn1 * dist_sq) *
                      min(ExtReal(0.5), inv);

  S approx = normalized_esp(values, n);
  S power = S(1);
  for (int i = 0; i < n; ++i) power = S(power * mean);
  out.actual = ExtReal(T::abs_double(S(approx - power)));
  return out;
}

/// Root-mean-square column bound on the permanent modulus; holds without
/// any restriction on the entries.
template <class S>
bool check_hadamard(const RectMatrix<S>& z,
                    std::uint64_t perm_budget = kDefaultTermBudget) {
  using T = scalar_traits<S>;
  const int N = z.rows();
  const int n = z.cols();
  double lhs = T::abs_double(permanent(z, perm_budget));
  double rhs = make_ratio(factorial_mpz(N), factorial_mpz(N - n)).get_d();
  for (int r = 0; r < n; ++r) {
    double col = 0.0;
    for (int j = 0; j < N; ++j) col += T::to_double(T::norm_sq(z(j, r)));
    rhs *= std::sqrt(col / N);
  }
  return lhs <= rhs * (1.0 + 1e-10) + 1e-12;
}

/// Sharp 0-1 upper bound through the factorial-root function.
template <class S>
bool check_bregman_minc(const RectMatrix<S>& z,
                        std::uint64_t perm_budget = kDefaultTermBudget) {
  using T = scalar_traits<S>;
  if (!is_zero_one(z)) {
    throw std::invalid_argument("check_bregman_minc: entries must be 0 or 1");
  }
  const int N = z.rows();
  const int n = z.cols();
  double lhs = T::abs_double(permanent(z, perm_budget));
  double scale = make_ratio(factorial_mpz(N), factorial_mpz(N - n)).get_d();
  double root = std::exp(std::lgamma(static_cast<double>(N) + 1.0) / N);  // (N!)^(1/N)
  double rhs = scale;
  for (int r = 0; r < n; ++r) {
    long colsum = 0;
    for (int j = 0; j < N; ++j) {
      if (z(j, r) == S(1)) ++colsum;
    }
    rhs *= zeta_bregman(colsum).value() / root;
  }
  return lhs <= rhs * (1.0 + 1e-10) + 1e-12;
}

/// The auxiliary inequalities between the statistics, each evaluated on the
/// matrix at hand. Flags are true when the inequality holds (vacuously true
/// where its precondition fails, e.g. the unit-disc-only comparisons).
struct AuxInequalities {
  bool alpha_identity = true;     // alpha = mean |z|^2 - beta
  bool theta_vs_alpha = true;     // theta2 <= 2 N alpha / (N-1)
  bool f_first_chain = true;      // f(x,1) <= (n-1)(1-x^{n/2})/(1-x) <= (n-1)min{n/2,1/(1-x)}
  bool theta3_upper = true;       // cubed-norm majorant
  bool theta4_upper = true;       // theta4 vs theta2^2 (n >= 4)
  bool f3_upper = true;           // f_second3(x,1) majorant
  bool g4_upper = true;           // g_second4(x,1) majorant
  bool gamma_ratio = true;        // gamma <= n/N on the unit disc

  bool all() const {
    return alpha_identity && theta_vs_alpha && f_first_chain && theta3_upper &&
           theta4_upper && f3_upper && g4_upper && gamma_ratio;
  }
};

template <class S>
AuxInequalities check_aux_inequalities(const RectMatrix<S>& z, StatsBudget sb = {}) {
  using T = scalar_traits<S>;
  using R = real_of_t<S>;
  const int N = z.rows();
  const int n = z.cols();
  if (n < 2) throw std::invalid_argument("check_aux_inequalities requires n >= 2");
  MatrixStats st = stats(z, sb);
  AuxInequalities out;
  auto holds = [](double lhs, double rhs) {
    return lhs <= rhs + 1e-10 * std::max(1.0, std::fabs(rhs));
  };

  // mean |z|^2 decomposition; exact in the rational domain
  {
    R total = R(0);
    for (int j = 0; j < N; ++j) {
      for (int r = 0; r < n; ++r) total = R(total + T::norm_sq(z(j, r)));
    }
    if constexpr (scalar_traits<S>::is_exact) {
      Rational mean_sq = scale_ratio(total, mpz_class(1), mpz_class(n) * N);
      out.alpha_identity = (exact_alpha(z) == Rational(mean_sq - exact_beta(z)));
    } else {
      double mean_sq = T::to_double(total) / (static_cast<double>(n) * N);
      out.alpha_identity =
          std::fabs(st.alpha.value() - (mean_sq - st.beta.value())) <= 1e-12;
    }
  }

  out.theta_vs_alpha = holds(st.theta2.value(), 2.0 * N * st.alpha.value() / (N - 1));

  if (st.beta.value() <= 1.0) {
    double x = std::sqrt(st.beta.value());
    double mid = (n - 1) * stable_half_power_ratio(n, x).value();
    double right = x < 1.0 ? (n - 1) * std::min(n / 2.0, 1.0 / (1.0 - x))
                           : (n - 1) * (n / 2.0);
    out.f_first_chain = holds(f_first(n, ExtReal(x), ExtReal(1.0)).value(), mid) &&
                        holds(mid, right);
    out.f3_upper = holds(f_second3(n, ExtReal(x), ExtReal(1.0)).value(),
                         2.0 * (n - 1) *
                             std::min(n * (n - 2) / 3.0,
                                      x < 1.0 ? 1.0 / ((1.0 - x) * (1.0 - x))
                                              : n * (n - 2) / 3.0));
    out.g4_upper = holds(g_second4(n, ExtReal(x), ExtReal(1.0)).value(),
                         2.0 * (n - 1) * (n - 3) *
                             std::min(n * (n - 2) / 8.0,
                                      x < 1.0 ? 1.0 / ((1.0 - x) * (1.0 - x))
                                              : n * (n - 2) / 8.0));
  }

  if (n >= 3) {
    // cube-summed pairwise norms majorize theta3
    auto ay = detail::abs_diff_table(z);
    double acc = 0.0;
    for (int u = 0; u < N; ++u) {
      for (int v = 0; v < N; ++v) {
        if (v == u) continue;
        double rowsum = 0.0;
        for (int r = 0; r < n; ++r) {
          double a = ay[static_cast<std::size_t>(r)][static_cast<std::size_t>(u) * N + v];
          rowsum += a * a;
        }
        acc += std::pow(rowsum, 1.5);
      }
    }
    double lead = 1.0 / (static_cast<double>(N) * (N - 1));  // (N-2)!/N!
    double root = std::sqrt(static_cast<double>(n) * (n - 1) * (n - 2));
    out.theta3_upper = holds(st.theta3.value(), lead * acc / root);
  }

  if (n >= 4) {
    double factor = std::sqrt(static_cast<double>(n) * (n - 1) /
                              (static_cast<double>(n - 2) * (n - 3))) *
                    (static_cast<double>(N) * (N - 1)) /
                    (static_cast<double>(N - 2) * (N - 3));
    out.theta4_upper =
        holds(st.theta4.value(), factor * st.theta2.value() * st.theta2.value());
  }

  if (st.unit_disc) {
    out.gamma_ratio = holds(st.gamma(1.0).value(), static_cast<double>(n) / N);
  }
  return out;
}

}  // namespace permlab
