#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/ext_real.hpp"
#include "permlab/matrix.hpp"

namespace permlab {

/// The third- and fourth-order difference statistics are direct sums of
/// cost O(N^3 n^3) and O(N^4 n^4); above this dimension they error out
/// rather than silently taking minutes.
struct StatsBudget {
  int max_dim_theta = 12;
};

/// Scalar statistics of a matrix, as extended nonnegative reals.
/// kappa2/3/4 follow the excluded-submatrix pattern (value 1 once the
/// column count does not exceed the order); kappa_tilde is present only for
/// 0-1 matrices. gamma(x) = (n alpha / N) min(x n, 1/(1-beta)).
struct MatrixStats {
  int rows = 0;
  int cols = 0;
  ExtReal alpha;
  ExtReal beta;
  ExtReal theta2;
  ExtReal theta3;
  ExtReal theta4;
  ExtReal kappa2;
  ExtReal kappa3;
  ExtReal kappa4;
  std::optional<ExtReal> kappa_tilde;
  bool unit_disc = false;
  bool zero_one = false;

  ExtReal gamma(double x) const {
    ExtReal inv = beta.value() < 1.0 ? ExtReal(1.0 / (1.0 - beta.value()))
                                     : ExtReal::inf();
    ExtReal lead = ExtReal(static_cast<double>(cols) * alpha.value() /
                           static_cast<double>(rows));
    return lead * min(ExtReal(x * static_cast<double>(cols)), inv);
  }
};

/// (k!)^(1/k) with the value 0 at k = 0.
inline ExtReal zeta_bregman(long k) {
  if (k < 0) throw std::invalid_argument("zeta_bregman: negative argument");
  if (k == 0) return ExtReal(0.0);
  return ExtReal(std::exp(std::lgamma(static_cast<double>(k) + 1.0) /
                          static_cast<double>(k)));
}

namespace detail {

/// |entry|^2 table in exact real arithmetic, then converted once.
template <class S>
std::vector<double> norm_sq_table(const RectMatrix<S>& z) {
  using T = scalar_traits<S>;
  std::vector<double> out(static_cast<std::size_t>(z.rows()) * z.cols());
  for (int j = 0; j < z.rows(); ++j) {
    for (int r = 0; r < z.cols(); ++r) {
      out[static_cast<std::size_t>(j) * z.cols() + r] =
          T::to_double(T::norm_sq(z(j, r)));
    }
  }
  return out;
}

/// |y(u,v,r)| table as doubles, indexed [r][u*N+v].
template <class S>
std::vector<std::vector<double>> abs_diff_table(const RectMatrix<S>& z) {
  using T = scalar_traits<S>;
  const int N = z.rows();
  const int n = z.cols();
  std::vector<std::vector<double>> a(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    auto& slab = a[static_cast<std::size_t>(r)];
    slab.resize(static_cast<std::size_t>(N) * N);
    for (int u = 0; u < N; ++u) {
      for (int v = 0; v < N; ++v) {
        slab[static_cast<std::size_t>(u) * N + v] = T::abs_double(S(z(u, r) - z(v, r)));
      }
    }
  }
  return a;
}

/// Max over excluded row/column nu-subsets of the complement |z|^2 sum,
/// divided by (n-nu)(N-nu); exhaustive enumeration, no pruning.
inline double kappa_order(const std::vector<double>& nsq, int N, int n, int nu) {
  if (n <= nu) return 1.0;
  double best = 0.0;
  std::vector<int> rowsJ, colsR;
  for_each_subset(N, nu, [&](std::span<const int> setJ) {
    for_each_subset(n, nu, [&](std::span<const int> setR) {
      double sum = 0.0;
      for (int j = 0; j < N; ++j) {
        if (std::find(setJ.begin(), setJ.end(), j) != setJ.end()) continue;
        for (int r = 0; r < n; ++r) {
          if (std::find(setR.begin(), setR.end(), r) != setR.end()) continue;
          sum += nsq[static_cast<std::size_t>(j) * n + r];
        }
      }
      best = std::max(best, sum);
    });
  });
  return best / (static_cast<double>(n - nu) * static_cast<double>(N - nu));
}

}  // namespace detail

/// All scalar statistics of the matrix. theta3 is zero when n = 2 and theta4
/// when n <= 3; both are guarded by the dimension budget above that.
template <class S>
MatrixStats stats(const RectMatrix<S>& z, StatsBudget budget = {}) {
  using T = scalar_traits<S>;
  using R = real_of_t<S>;
  const int N = z.rows();
  const int n = z.cols();
  MatrixStats st;
  st.rows = N;
  st.cols = n;
  st.unit_disc = in_unit_disc(z);
  st.zero_one = is_zero_one(z);

  ColumnStats<S> cs = column_stats(z);
  {
    R acc = R(0);
    for (int j = 0; j < N; ++j) {
      for (int r = 0; r < n; ++r) acc = R(acc + T::norm_sq(cs.residual(j, r)));
    }
    st.alpha = ExtReal(T::to_double(acc) / (static_cast<double>(n) * N));
    R bacc = R(0);
    for (int r = 0; r < n; ++r) {
      bacc = R(bacc + T::norm_sq(cs.mean[static_cast<std::size_t>(r)]));
    }
    st.beta = ExtReal(T::to_double(bacc) / static_cast<double>(n));
  }

  std::vector<std::vector<double>> ay = detail::abs_diff_table(z);

  // pairwise statistic: sqrt over column pairs of squared row-pair sums
  if (n >= 2) {
    double q = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        if (s == r) continue;
        double inner = 0.0;
        for (int u = 0; u < N; ++u) {
          for (int v = 0; v < N; ++v) {
            if (v == u) continue;
            inner += ay[static_cast<std::size_t>(r)][static_cast<std::size_t>(u) * N + v] *
                     ay[static_cast<std::size_t>(s)][static_cast<std::size_t>(u) * N + v];
          }
        }
        q += inner * inner;
      }
    }
    st.theta2 = ExtReal(std::sqrt(q / (static_cast<double>(n) * (n - 1))) /
                        (static_cast<double>(N) * (N - 1)));
  } else {
    st.theta2 = ExtReal(0.0);
  }

  if (n >= 3) {
    if (N > budget.max_dim_theta || n > budget.max_dim_theta) {
      throw budget_error("stats: third/fourth order statistics too large");
    }
    double q = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        if (s == r) continue;
        for (int t = 0; t < n; ++t) {
          if (t == r || t == s) continue;
          double inner = 0.0;
          const auto& ar = ay[static_cast<std::size_t>(r)];
          const auto& as = ay[static_cast<std::size_t>(s)];
          const auto& at = ay[static_cast<std::size_t>(t)];
          for (int u = 0; u < N; ++u) {
            for (int v = 0; v < N; ++v) {
              if (v == u) continue;
              double uv = ar[static_cast<std::size_t>(u) * N + v] *
                          as[static_cast<std::size_t>(u) * N + v];
              if (uv == 0.0) continue;
              for (int w = 0; w < N; ++w) {
                if (w == u || w == v) continue;
                inner += uv * at[static_cast<std::size_t>(u) * N + w];
              }
            }
          }
          q += inner * inner;
        }
      }
    }
    double lead = 1.0 / (static_cast<double>(N) * (N - 1) * (N - 2));
    double root = std::sqrt(static_cast<double>(n) * (n - 1) * (n - 2));
    st.theta3 = ExtReal(lead * std::sqrt(q) / root);
  } else {
    st.theta3 = ExtReal(0.0);
  }

  if (n >= 4) {
    double q = 0.0;
    const std::size_t NN = static_cast<std::size_t>(N) * N;
    std::vector<double> pq(NN);
    std::vector<double> stab(NN);
    for (int cq = 0; cq < n; ++cq) {
      for (int cr = 0; cr < n; ++cr) {
        if (cr == cq) continue;
        for (std::size_t i = 0; i < NN; ++i) {
          pq[i] = ay[static_cast<std::size_t>(cq)][i] * ay[static_cast<std::size_t>(cr)][i];
        }
        for (int cs = 0; cs < n; ++cs) {
          if (cs == cq || cs == cr) continue;
          for (int ct = 0; ct < n; ++ct) {
            if (ct == cq || ct == cr || ct == cs) continue;
            for (std::size_t i = 0; i < NN; ++i) {
              stab[i] = ay[static_cast<std::size_t>(cs)][i] *
                        ay[static_cast<std::size_t>(ct)][i];
            }
            double inner = 0.0;
            for (int u = 0; u < N; ++u) {
              for (int v = 0; v < N; ++v) {
                if (v == u) continue;
                double head = pq[static_cast<std::size_t>(u) * N + v];
                if (head == 0.0) continue;
                for (int w = 0; w < N; ++w) {
                  if (w == u || w == v) continue;
                  for (int x = 0; x < N; ++x) {
                    if (x == u || x == v || x == w) continue;
                    inner += head * stab[static_cast<std::size_t>(w) * N + x];
                  }
                }
              }
            }
            q += inner * inner;
          }
        }
      }
    }
    double lead = 1.0 / (static_cast<double>(N) * (N - 1) * (N - 2) * (N - 3));
    double root = std::sqrt(static_cast<double>(n) * (n - 1) * (n - 2) * (n - 3));
    st.theta4 = ExtReal(lead * std::sqrt(q) / root);
  } else {
    st.theta4 = ExtReal(0.0);
  }

  std::vector<double> nsq = detail::norm_sq_table(z);
  st.kappa2 = ExtReal(detail::kappa_order(nsq, N, n, 2));
  st.kappa3 = ExtReal(detail::kappa_order(nsq, N, n, 3));
  st.kappa4 = ExtReal(detail::kappa_order(nsq, N, n, 4));

  if (st.zero_one) {
    if (n == 2) {
      st.kappa_tilde = ExtReal(1.0);
    } else {
      // integer column sums with two rows excluded, fed through zeta
      double denom;
      if (N == 2) {
        denom = 1.0;  // ((N-2)!)^(2/(N-2)) = 1^inf = 1
      } else {
        denom = std::exp(std::lgamma(static_cast<double>(N - 1)) * 2.0 /
                         static_cast<double>(N - 2));
      }
      std::vector<long> colsum(static_cast<std::size_t>(n), 0);
      for (int r = 0; r < n; ++r) {
        long c = 0;
        for (int j = 0; j < N; ++j) {
          if (z(j, r) == S(1)) ++c;
        }
        colsum[static_cast<std::size_t>(r)] = c;
      }
      auto entry_is_one = [&](int j, int r) { return z(j, r) == S(1); };
      double best = 0.0;
      for (int u = 0; u < N; ++u) {
        for (int v = 0; v < N; ++v) {
          if (v == u) continue;
          for (int r = 0; r < n; ++r) {
            for (int s = 0; s < n; ++s) {
              if (s == r) continue;
              double sum = 0.0;
              for (int l = 0; l < n; ++l) {
                if (l == r || l == s) continue;
                long eta = colsum[static_cast<std::size_t>(l)] -
                           (entry_is_one(u, l) ? 1 : 0) - (entry_is_one(v, l) ? 1 : 0);
                double zeta = zeta_bregman(eta).value();
                sum += zeta * zeta / denom;
              }
              best = std::max(best, sum);
            }
          }
        }
      }
      st.kappa_tilde = ExtReal(best / (n - 2));
    }
  }
  return st;
}

/// Exact rational statistics, used to pin the closed-form family values.
inline Rational exact_alpha(const RectMatrix<Rational>& z) {
  ColumnStats<Rational> cs = column_stats(z);
  Rational acc(0);
  for (int j = 0; j < z.rows(); ++j) {
    for (int r = 0; r < z.cols(); ++r) {
      acc = Rational(acc + cs.residual(j, r) * cs.residual(j, r));
    }
  }
  return scale_ratio(acc, mpz_class(1), mpz_class(z.rows()) * z.cols());
}

inline Rational exact_beta(const RectMatrix<Rational>& z) {
  ColumnStats<Rational> cs = column_stats(z);
  Rational acc(0);
  for (const Rational& m : cs.mean) acc = Rational(acc + m * m);
  return scale_ratio(acc, mpz_class(1), mpz_class(z.cols()));
}

/// Square of the pairwise statistic (the statistic itself is a square root).
inline Rational exact_theta2_sq(const RectMatrix<Rational>& z) {
  const int N = z.rows();
  const int n = z.cols();
  if (n < 2) return Rational(0);
  Rational q(0);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      if (s == r) continue;
      Rational inner(0);
      for (int u = 0; u < N; ++u) {
        for (int v = 0; v < N; ++v) {
          if (v == u) continue;
          Rational p = Rational(abs(Rational(z(u, r) - z(v, r))) *
                                abs(Rational(z(u, s) - z(v, s))));
          inner = Rational(inner + p);
        }
      }
      q = Rational(q + inner * inner);
    }
  }
  mpz_class den = mpz_class(n) * (n - 1) * mpz_class(N) * N * mpz_class(N - 1) * (N - 1);
  return scale_ratio(q, mpz_class(1), den);
}

/// gamma(1) as an exact rational (the min resolves exactly; at beta = 1 the
/// unbounded branch is infinite and the linear branch wins).
inline Rational exact_gamma1(const RectMatrix<Rational>& z) {
  const int N = z.rows();
  const int n = z.cols();
  Rational a = exact_alpha(z);
  Rational b = exact_beta(z);
  Rational lead = scale_ratio(a, mpz_class(n), mpz_class(N));
  Rational linear(n);
  if (b >= 1) return Rational(lead * linear);
  Rational inv = Rational(Rational(1) / Rational(Rational(1) - b));
  return Rational(lead * std::min(linear, inv));
}

}  // namespace permlab
