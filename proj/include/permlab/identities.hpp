#pragma once

// Exact verification of the product-difference identities. Every checker
// evaluates both sides of its identity by a literal transcription of the
// displayed sums, with no algebraic simplification, so a transcription
// error on either side is caught by the other.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "permlab/ext_real.hpp"
#include "permlab/matrix.hpp"
#include "permlab/permanent.hpp"

namespace permlab {

template <class S>
struct IdentityReport {
  std::string id;
  S lhs;
  S rhs;
  bool equal = false;
  ExtReal discrepancy;  // exactly 0 in the rational domain when equal
  ExtReal tolerance;    // 0 in the rational domain
};

namespace detail {

template <class S>
IdentityReport<S> finish_report(std::string id, S lhs, S rhs, double rel_tol) {
  IdentityReport<S> rep{std::move(id), lhs, rhs, false, ExtReal(0.0), ExtReal(0.0)};
  if constexpr (scalar_traits<S>::is_exact) {
    rep.equal = (lhs == rhs);
    rep.discrepancy = ExtReal(scalar_traits<S>::abs_double(S(lhs - rhs)));
  } else {
    double diff = scalar_traits<S>::abs_double(S(lhs - rhs));
    double scale = std::max({1.0, scalar_traits<S>::abs_double(lhs),
                             scalar_traits<S>::abs_double(rhs)});
    rep.tolerance = ExtReal(rel_tol * scale);
    rep.discrepancy = ExtReal(diff);
    rep.equal = diff <= rel_tol * scale;
  }
  return rep;
}

inline bool contains(std::span<const int> set, int x) {
  return std::find(set.begin(), set.end(), x) != set.end();
}

inline std::vector<int> sorted_union(std::span<const int> a, int extra) {
  std::vector<int> out(a.begin(), a.end());
  out.push_back(extra);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<int> sorted_minus(std::span<const int> a, int drop) {
  std::vector<int> out;
  out.reserve(a.size());
  for (int x : a) {
    if (x != drop) out.push_back(x);
  }
  return out;
}

inline std::vector<int> complement(int n, std::span<const int> a) {
  std::vector<int> out;
  for (int r = 0; r < n; ++r) {
    if (!contains(a, r)) out.push_back(r);
  }
  return out;
}

/// Entry differences within one column, tabulated once per checker.
template <class S>
class PairDiffs {
 public:
  explicit PairDiffs(const RectMatrix<S>& z)
      : rows_(z.rows()), cols_(z.cols()),
        y_(static_cast<std::size_t>(rows_) * rows_ * cols_) {
    for (int u = 0; u < rows_; ++u) {
      for (int v = 0; v < rows_; ++v) {
        for (int r = 0; r < cols_; ++r) {
          y_[idx(u, v, r)] = S(z(u, r) - z(v, r));
        }
      }
    }
  }
  const S& operator()(int u, int v, int r) const { return y_[idx(u, v, r)]; }

 private:
  std::size_t idx(int u, int v, int r) const {
    return (static_cast<std::size_t>(u) * rows_ + v) * cols_ + r;
  }
  int rows_, cols_;
  std::vector<S> y_;
};

/// All injective column-to-row assignments, flattened for repeated walks.
class InjectionList {
 public:
  InjectionList(int num_rows, int arity) : arity_(arity) {
    for_each_injection(num_rows, arity, [&](std::span<const int> j) {
      flat_.insert(flat_.end(), j.begin(), j.end());
    });
  }
  std::size_t size() const { return flat_.size() / static_cast<std::size_t>(arity_); }
  std::span<const int> operator[](std::size_t i) const {
    return {flat_.data() + i * static_cast<std::size_t>(arity_),
            static_cast<std::size_t>(arity_)};
  }

 private:
  int arity_;
  std::vector<int> flat_;
};

template <class S>
S pow_scalar(const S& base, int e) {
  S acc = S(1);
  for (int i = 0; i < e; ++i) acc = S(acc * base);
  return acc;
}

template <class S>
S mean_of(std::span<const S> values) {
  S sum = S(0);
  for (const S& v : values) sum = S(sum + v);
  return scale_ratio(sum, mpz_class(1), mpz_class(static_cast<long>(values.size())));
}

template <class S>
std::vector<S> drop_indices(std::span<const S> values, std::span<const int> drop) {
  std::vector<S> out;
  out.reserve(values.size());
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (!contains(drop, i)) out.push_back(values[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace detail

/// Product-transfer identity: for column subsets R, S and a column r outside
/// both, p-bar(R+r) p-bar(S) - p-bar(R) p-bar(S+r) equals a half-sum over a
/// second column s, ordered row pairs (u,v) and constrained injections. The
/// constrained sums fix the named coordinates and enumerate the remainder.
template <class S>
IdentityReport<S> check_product_transfer(const RectMatrix<S>& z,
                                         std::span<const int> setR,
                                         std::span<const int> setS, int col_r,
                                         double rel_tol = 1e-9) {
  const int N = z.rows();
  const int n = z.cols();
  if (col_r < 0 || col_r >= n || detail::contains(setR, col_r) ||
      detail::contains(setS, col_r)) {
    throw std::invalid_argument("check_product_transfer: r must lie outside R and S");
  }

  std::vector<int> r_plus = detail::sorted_union(setR, col_r);
  std::vector<int> s_plus = detail::sorted_union(setS, col_r);
  S lhs = S(injection_sum(z, std::span<const int>(r_plus)) * injection_sum(z, setS) -
            injection_sum(z, setR) * injection_sum(z, std::span<const int>(s_plus)));

  S rhs = S(0);
  if (n > 1) {
    detail::PairDiffs<S> y(z);
    std::vector<int> slot(static_cast<std::size_t>(n), -1);
    std::vector<int> slot_k(static_cast<std::size_t>(n), -1);
    S total = S(0);
    for (int s = 0; s < n; ++s) {
      if (s == col_r) continue;
      bool in_s = detail::contains(setS, s);
      bool in_r = detail::contains(setR, s);
      if (!in_s && !in_r) continue;  // both indicators vanish
      std::vector<int> s_minus = detail::sorted_minus(setS, s);
      std::vector<int> r_minus = detail::sorted_minus(setR, s);
      std::vector<int> j_free = detail::complement(n, std::vector<int>{col_r, s});
      std::vector<int> k_free = detail::complement(n, std::vector<int>{col_r});
      for (int u = 0; u < N; ++u) {
        for (int v = 0; v < N; ++v) {
          if (u == v) continue;
          S w = S(y(u, v, col_r) * y(u, v, s));
          S inner = S(0);
          std::fill(slot.begin(), slot.end(), -1);
          slot[static_cast<std::size_t>(col_r)] = u;
          slot[static_cast<std::size_t>(s)] = v;
          unsigned used_j = (1u << u) | (1u << v);
          for_each_assignment(N, j_free, used_j, slot, [&](std::span<const int> ja) {
            S pj_s = in_s ? injection_product(z, ja, std::span<const int>(s_minus)) : S(0);
            S pj_r = in_r ? injection_product(z, ja, std::span<const int>(r_minus)) : S(0);
            std::fill(slot_k.begin(), slot_k.end(), -1);
            slot_k[static_cast<std::size_t>(col_r)] = u;
            for_each_assignment(N, k_free, 1u << u, slot_k, [&](std::span<const int> ka) {
              if (in_s) {
                inner = S(inner + pj_s * injection_product(z, ka, setR));
              }
              if (in_r) {
                inner = S(inner - pj_r * injection_product(z, ka, setS));
              }
            });
          });
          total = S(total + w * inner);
        }
      }
    }
    rhs = scale_ratio(total, mpz_class(1), mpz_class(2));
  }
  return detail::finish_report("product_transfer", lhs, rhs, rel_tol);
}

/// Classical elementary-symmetric-polynomial identity: the weighted product
/// difference of consecutive ESPs equals a half-sum of squared pairwise
/// differences times ESP differences on the ground set minus the pair.
template <class S>
IdentityReport<S> check_dougall_esp(std::span<const S> values, int a, int b,
                                    double rel_tol = 1e-9) {
  const int N = static_cast<int>(values.size());
  if (a < 0 || a > N || b < 0 || b > N) {
    throw std::invalid_argument("check_dougall_esp: degrees must lie in 0..N");
  }
  std::vector<S> e_full = esp_all(values);
  auto e_at = [](const std::vector<S>& table, int k) {
    if (k < 0 || k >= static_cast<int>(table.size())) return S(0);
    return table[static_cast<std::size_t>(k)];
  };

  S lhs = S(scale_ratio(S(e_at(e_full, a + 1) * e_at(e_full, b)),
                        mpz_class(a + 1) * (N - b), mpz_class(1)) -
            scale_ratio(S(e_at(e_full, a) * e_at(e_full, b + 1)),
                        mpz_class(b + 1) * (N - a), mpz_class(1)));

  S total = S(0);
  for (int u = 0; u < N; ++u) {
    for (int v = 0; v < N; ++v) {
      if (u == v) continue;
      std::vector<int> pair = {u, v};
      std::vector<S> reduced = detail::drop_indices(values, pair);
      std::vector<S> e_red = esp_all(std::span<const S>(reduced.data(), reduced.size()));
      S diff = S(values[static_cast<std::size_t>(u)] - values[static_cast<std::size_t>(v)]);
      S inner = S(e_at(e_red, b - 1) * e_at(e_red, a) - e_at(e_red, a - 1) * e_at(e_red, b));
      total = S(total + diff * diff * inner);
    }
  }
  S rhs = scale_ratio(total, mpz_class(1), mpz_class(2));
  return detail::finish_report("dougall_esp", lhs, rhs, rel_tol);
}

/// One chain step: p-bar(R+r) - mean_r p-bar(R) as a sum over the columns of
/// R of paired-difference products along full injections.
template <class S>
IdentityReport<S> check_chain_step(const RectMatrix<S>& z, std::span<const int> setR,
                                   int col_r, double rel_tol = 1e-9) {
  const int N = z.rows();
  const int n = z.cols();
  if (col_r < 0 || col_r >= n || detail::contains(setR, col_r)) {
    throw std::invalid_argument("check_chain_step: r must lie outside R");
  }
  ColumnStats<S> cs = column_stats(z);
  std::vector<int> r_plus = detail::sorted_union(setR, col_r);
  S lhs = S(injection_sum(z, std::span<const int>(r_plus)) -
            cs.mean[static_cast<std::size_t>(col_r)] * injection_sum(z, setR));

  detail::PairDiffs<S> y(z);
  detail::InjectionList inj(N, n);
  S total = S(0);
  for (int s : setR) {
    std::vector<int> r_minus = detail::sorted_minus(setR, s);
    for (std::size_t i = 0; i < inj.size(); ++i) {
      std::span<const int> j = inj[i];
      int jr = j[static_cast<std::size_t>(col_r)];
      int js = j[static_cast<std::size_t>(s)];
      S term = S(y(jr, js, col_r) * y(jr, js, s));
      for (int c : r_minus) term = S(term * z(j[static_cast<std::size_t>(c)], c));
      total = S(total + term);
    }
  }
  S rhs = scale_ratio(S(-total), mpz_class(1), mpz_class(2) * N);
  return detail::finish_report("chain_step", lhs, rhs, rel_tol);
}

enum class FirstOrderVariant { chain, symmetric, grouped };

inline const char* first_order_id(FirstOrderVariant v) {
  switch (v) {
    case FirstOrderVariant::chain: return "first_order_chain";
    case FirstOrderVariant::symmetric: return "first_order_symmetric";
    case FirstOrderVariant::grouped: return "first_order_grouped";
  }
  return "first_order";
}

/// First-order expansion of Per(Z) - N!/(N-n)! prod of column means, in its
/// three displayed forms: along a maximal chain of column subsets (needs a
/// permutation of the columns), symmetrized over all subsets of each size,
/// and grouped by row pairs. All three produce the same value.
template <class S>
IdentityReport<S> check_first_order(const RectMatrix<S>& z, FirstOrderVariant variant,
                                    std::span<const int> chain_order = {},
                                    double rel_tol = 1e-9) {
  const int N = z.rows();
  const int n = z.cols();
  ColumnStats<S> cs = column_stats(z);
  std::vector<int> all = detail::complement(n, std::vector<int>{});
  S ptilde_full = mean_product(cs.mean, std::span<const int>(all));
  S lhs = S(injection_sum(z, std::span<const int>(all)) -
            scale_ratio(ptilde_full, factorial_mpz(N), factorial_mpz(N - n)));

  S rhs = S(0);
  if (n > 1) {
    detail::PairDiffs<S> y(z);
    detail::InjectionList inj(N, n);
    switch (variant) {
      case FirstOrderVariant::chain: {
        std::vector<int> perm(all);
        if (!chain_order.empty()) {
          perm.assign(chain_order.begin(), chain_order.end());
          std::vector<int> check(perm);
          std::sort(check.begin(), check.end());
          if (check != all) {
            throw std::invalid_argument("check_first_order: invalid chain permutation");
          }
        }
        S total = S(0);
        for (int k = 2; k <= n; ++k) {
          int rk = perm[static_cast<std::size_t>(k - 1)];
          std::vector<int> prev(perm.begin(), perm.begin() + (k - 1));
          std::sort(prev.begin(), prev.end());
          std::vector<int> taken(perm.begin(), perm.begin() + k);
          std::sort(taken.begin(), taken.end());
          std::vector<int> outside = detail::complement(n, taken);
          S ptail = mean_product(cs.mean, std::span<const int>(outside));
          for (int s : prev) {
            std::vector<int> prev_minus = detail::sorted_minus(prev, s);
            S inner = S(0);
            for (std::size_t i = 0; i < inj.size(); ++i) {
              std::span<const int> j = inj[i];
              int jr = j[static_cast<std::size_t>(rk)];
              int js = j[static_cast<std::size_t>(s)];
              S term = S(y(jr, js, rk) * y(jr, js, s));
              for (int c : prev_minus) term = S(term * z(j[static_cast<std::size_t>(c)], c));
              inner = S(inner + term);
            }
            total = S(total + inner * ptail);
          }
        }
        rhs = scale_ratio(S(-total), mpz_class(1), mpz_class(2) * N);
        break;
      }
      case FirstOrderVariant::symmetric: {
        S total = S(0);
        for (int k = 2; k <= n; ++k) {
          S level = S(0);
          for_each_subset(n, k, [&](std::span<const int> setR) {
            std::vector<int> outside = detail::complement(n, setR);
            S ptail = mean_product(cs.mean, std::span<const int>(outside));
            S subset_sum = S(0);
            for (int r : setR) {
              for (int s : setR) {
                if (s == r) continue;
                std::vector<int> rest;
                for (int c : setR) {
                  if (c != r && c != s) rest.push_back(c);
                }
                for (std::size_t i = 0; i < inj.size(); ++i) {
                  std::span<const int> j = inj[i];
                  int jr = j[static_cast<std::size_t>(r)];
                  int js = j[static_cast<std::size_t>(s)];
                  S term = S(y(jr, js, r) * y(jr, js, s));
                  for (int c : rest) term = S(term * z(j[static_cast<std::size_t>(c)], c));
                  subset_sum = S(subset_sum + term);
                }
              }
            }
            level = S(level + subset_sum * ptail);
          });
          total = S(total + scale_ratio(level, mpz_class(1),
                                        mpz_class(2) * N * k * binomial_mpz(n, k)));
        }
        rhs = S(-total);
        break;
      }
      case FirstOrderVariant::grouped: {
        S total = S(0);
        std::vector<int> slot(static_cast<std::size_t>(n), -1);
        for (int u = 0; u < N; ++u) {
          for (int v = 0; v < N; ++v) {
            if (u == v) continue;
            for (int r = 0; r < n; ++r) {
              for (int s = 0; s < n; ++s) {
                if (s == r) continue;
                S w = S(y(u, v, r) * y(u, v, s));
                std::vector<int> other_cols = detail::complement(n, std::vector<int>{r, s});
                S ksum = S(0);
                for (int k = 2; k <= n; ++k) {
                  S level = S(0);
                  for_each_subset_of(std::span<const int>(other_cols), k - 2,
                                     [&](std::span<const int> setR) {
                    std::vector<int> covered = detail::sorted_union(setR, r);
                    covered = detail::sorted_union(covered, s);
                    std::vector<int> outside = detail::complement(n, covered);
                    S ptail = mean_product(cs.mean, std::span<const int>(outside));
                    S jsum = S(0);
                    std::fill(slot.begin(), slot.end(), -1);
                    unsigned used = (1u << u) | (1u << v);
                    for_each_assignment(N, other_cols, used, slot,
                                        [&](std::span<const int> ja) {
                      jsum = S(jsum + injection_product(z, ja, setR));
                    });
                    level = S(level + ptail * jsum);
                  });
                  ksum = S(ksum + scale_ratio(level, mpz_class(1),
                                              mpz_class(2) * N * k * binomial_mpz(n, k)));
                }
                total = S(total + w * ksum);
              }
            }
          }
        }
        rhs = S(-total);
        break;
      }
    }
  }
  return detail::finish_report(first_order_id(variant), lhs, rhs, rel_tol);
}

/// Expansion of the gap between the normalized ESP of degree n and the n-th
/// power of the mean; at n = N this is the classical product identity, which
/// is verified as well in that case.
template <class S>
IdentityReport<S> check_esp_expansion(std::span<const S> values, int n,
                                      double rel_tol = 1e-9) {
  const int N = static_cast<int>(values.size());
  if (n < 1 || n > N) throw std::invalid_argument("check_esp_expansion: n out of range");
  S mean = detail::mean_of(values);
  S lhs = S(scale_ratio(esp(values, n), mpz_class(1), binomial_mpz(N, n)) -
            detail::pow_scalar(mean, n));

  S total = S(0);
  for (int u = 0; u < N; ++u) {
    for (int v = 0; v < N; ++v) {
      if (u == v) continue;
      std::vector<int> pair = {u, v};
      std::vector<S> reduced = detail::drop_indices(values, pair);
      std::vector<S> e_red = esp_all(std::span<const S>(reduced.data(), reduced.size()));
      S diff = S(values[static_cast<std::size_t>(u)] - values[static_cast<std::size_t>(v)]);
      S ksum = S(0);
      for (int k = 2; k <= n; ++k) {
        S term = S(detail::pow_scalar(mean, n - k) * e_red[static_cast<std::size_t>(k - 2)]);
        ksum = S(ksum + scale_ratio(term, mpz_class(1), mpz_class(k) * binomial_mpz(N, k)));
      }
      total = S(total + diff * diff * ksum);
    }
  }
  S rhs = scale_ratio(S(-total), mpz_class(1), mpz_class(2) * N);

  IdentityReport<S> rep = detail::finish_report("esp_expansion", lhs, rhs, rel_tol);
  if (n == N) {
    // product form of the same expansion
    S prod = S(1);
    for (const S& zj : values) prod = S(prod * zj);
    S lhs_prod = S(prod - detail::pow_scalar(mean, n));
    IdentityReport<S> rep2 = detail::finish_report("esp_expansion", lhs_prod, rhs, rel_tol);
    rep.equal = rep.equal && rep2.equal;
    rep.discrepancy = max(rep.discrepancy, rep2.discrepancy);
  }
  return rep;
}

/// Difference lemma: the paired-difference weighted gap between p_{j,R+t}
/// and mean_t p_{j,R}, summed over injections, equals a triple-difference
/// term minus a quadruple-difference term.
template <class S>
IdentityReport<S> check_difference_lemma(const RectMatrix<S>& z, std::span<const int> setR,
                                         int r, int s, int t, double rel_tol = 1e-9) {
  const int N = z.rows();
  const int n = z.cols();
  if (n < 3) throw std::invalid_argument("check_difference_lemma: requires n >= 3");
  if (static_cast<int>(setR.size()) > n - 3) {
    throw std::invalid_argument("check_difference_lemma: |R| must be at most n-3");
  }
  if (r == s || r == t || s == t || detail::contains(setR, r) ||
      detail::contains(setR, s) || detail::contains(setR, t)) {
    throw std::invalid_argument("check_difference_lemma: r,s,t must be distinct outside R");
  }
  ColumnStats<S> cs = column_stats(z);
  detail::PairDiffs<S> y(z);
  detail::InjectionList inj(N, n);
  std::vector<int> r_plus_t = detail::sorted_union(setR, t);

  S lhs = S(0);
  for (std::size_t i = 0; i < inj.size(); ++i) {
    std::span<const int> j = inj[i];
    int jr = j[static_cast<std::size_t>(r)];
    int js = j[static_cast<std::size_t>(s)];
    S w = S(y(jr, js, r) * y(jr, js, s));
    S gap = S(injection_product(z, j, std::span<const int>(r_plus_t)) -
              cs.mean[static_cast<std::size_t>(t)] * injection_product(z, j, setR));
    lhs = S(lhs + w * gap);
  }

  S d1 = S(0);
  for (std::size_t i = 0; i < inj.size(); ++i) {
    std::span<const int> j = inj[i];
    int jr = j[static_cast<std::size_t>(r)];
    int js = j[static_cast<std::size_t>(s)];
    int jt = j[static_cast<std::size_t>(t)];
    S term = S(y(jr, js, r) * y(jr, js, s));
    term = S(term * y(jt, jr, t));
    term = S(term * injection_product(z, j, setR));
    d1 = S(d1 + term);
  }
  d1 = scale_ratio(d1, mpz_class(2), mpz_class(N));

  S d2 = S(0);
  for (int q : setR) {
    std::vector<int> r_minus = detail::sorted_minus(setR, q);
    for (std::size_t i = 0; i < inj.size(); ++i) {
      std::span<const int> j = inj[i];
      int jr = j[static_cast<std::size_t>(r)];
      int js = j[static_cast<std::size_t>(s)];
      int jt = j[static_cast<std::size_t>(t)];
      int jq = j[static_cast<std::size_t>(q)];
      S term = S(y(jr, js, r) * y(jr, js, s));
      term = S(term * y(jt, jq, t));
      term = S(term * y(jt, jq, q));
      term = S(term * injection_product(z, j, std::span<const int>(r_minus)));
      d2 = S(d2 + term);
    }
  }
  d2 = scale_ratio(d2, mpz_class(1), mpz_class(2) * N);

  return detail::finish_report("difference_lemma", lhs, S(d1 - d2), rel_tol);
}

/// Second-order expansion: Per(Z) - N!/(N-n)! prod of means plus the scaled
/// two-column correction equals a weighted triple-difference sum plus a
/// weighted quadruple-difference sum over column subsets.
template <class S>
IdentityReport<S> check_second_order(const RectMatrix<S>& z, double rel_tol = 1e-9) {
  const int N = z.rows();
  const int n = z.cols();
  if (n < 2) throw std::invalid_argument("check_second_order: requires n >= 2");

  ColumnStats<S> cs = column_stats(z);
  std::vector<int> all = detail::complement(n, std::vector<int>{});
  S ptilde_full = mean_product(cs.mean, std::span<const int>(all));

  // correction term: sum over column pairs of the residual-product row sums
  S corr = S(0);
  for (int r = 0; r < n; ++r) {
    for (int s = r + 1; s < n; ++s) {
      S inner = S(0);
      for (int j = 0; j < N; ++j) {
        inner = S(inner + cs.residual(j, r) * cs.residual(j, s));
      }
      std::vector<int> outside = detail::complement(n, std::vector<int>{r, s});
      corr = S(corr + mean_product(cs.mean, std::span<const int>(outside)) * inner);
    }
  }

  S lhs = S(injection_sum(z, std::span<const int>(all)) -
            scale_ratio(ptilde_full, factorial_mpz(N), factorial_mpz(N - n)) +
            scale_ratio(corr, factorial_mpz(N - 2), factorial_mpz(N - n)));

  S rhs = S(0);
  if (n > 2) {
    detail::PairDiffs<S> y(z);
    detail::InjectionList inj(N, n);

    S triple = S(0);
    for (int k = 3; k <= n; ++k) {
      mpq_class w = second_order_weight(k, n);
      for_each_subset(n, k, [&](std::span<const int> setR) {
        std::vector<int> outside = detail::complement(n, setR);
        S ptail = mean_product(cs.mean, std::span<const int>(outside));
        S subset_sum = S(0);
        std::vector<int> rest;
        for (int r : setR) {
          for (int s : setR) {
            if (s == r) continue;
            for (int t : setR) {
              if (t == r || t == s) continue;
              rest.clear();
              for (int c : setR) {
                if (c != r && c != s && c != t) rest.push_back(c);
              }
              for (std::size_t i = 0; i < inj.size(); ++i) {
                std::span<const int> j = inj[i];
                int jr = j[static_cast<std::size_t>(r)];
                int js = j[static_cast<std::size_t>(s)];
                int jt = j[static_cast<std::size_t>(t)];
                S term = S(y(jr, js, r) * y(jr, js, s));
                term = S(term * y(jr, jt, t));
                for (int c : rest) term = S(term * z(j[static_cast<std::size_t>(c)], c));
                subset_sum = S(subset_sum + term);
              }
            }
          }
        }
        triple = S(triple + scale_ratio(S(subset_sum * ptail), w.get_num(), w.get_den()));
      });
    }

    S quad = S(0);
    for (int k = 4; k <= n; ++k) {
      mpq_class w = second_order_weight(k, n);
      for_each_subset(n, k, [&](std::span<const int> setR) {
        std::vector<int> outside = detail::complement(n, setR);
        S ptail = mean_product(cs.mean, std::span<const int>(outside));
        S subset_sum = S(0);
        std::vector<int> rest;
        for (int q : setR) {
          for (int r : setR) {
            if (r == q) continue;
            for (int s : setR) {
              if (s == q || s == r) continue;
              for (int t : setR) {
                if (t == q || t == r || t == s) continue;
                rest.clear();
                for (int c : setR) {
                  if (c != q && c != r && c != s && c != t) rest.push_back(c);
                }
                for (std::size_t i = 0; i < inj.size(); ++i) {
                  std::span<const int> j = inj[i];
                  int jq = j[static_cast<std::size_t>(q)];
                  int jr = j[static_cast<std::size_t>(r)];
                  int js = j[static_cast<std::size_t>(s)];
                  int jt = j[static_cast<std::size_t>(t)];
                  S term = S(y(jq, jr, q) * y(jq, jr, r));
                  term = S(term * y(js, jt, s));
                  term = S(term * y(js, jt, t));
                  for (int c : rest) term = S(term * z(j[static_cast<std::size_t>(c)], c));
                  subset_sum = S(subset_sum + term);
                }
              }
            }
          }
        }
        quad = S(quad + scale_ratio(S(subset_sum * ptail), w.get_num(), w.get_den()));
      });
    }

    mpz_class n2 = mpz_class(N) * N;
    rhs = S(scale_ratio(triple, mpz_class(1), 2 * n2) +
            scale_ratio(quad, mpz_class(1), 8 * n2));
  }
  return detail::finish_report("second_order", lhs, rhs, rel_tol);
}

/// Second-order expansion for normalized ESPs of a value list, with the
/// triple and quadruple index sums running over the ground set directly.
template <class S>
IdentityReport<S> check_esp_second_order(std::span<const S> values, int n,
                                         double rel_tol = 1e-9) {
  const int N = static_cast<int>(values.size());
  if (n < 2 || n > N) {
    throw std::invalid_argument("check_esp_second_order: n out of range");
  }
  S mean = detail::mean_of(values);

  S resid = S(0);
  for (const S& zj : values) {
    S d = S(zj - mean);
    resid = S(resid + d * d);
  }
  S lhs = S(scale_ratio(esp(values, n), mpz_class(1), binomial_mpz(N, n)) -
            detail::pow_scalar(mean, n) +
            scale_ratio(S(resid * detail::pow_scalar(mean, n - 2)),
                        mpz_class(n) * (n - 1), mpz_class(2) * N * (N - 1)));

  S rhs = S(0);
  if (n > 2) {
    auto value_at = [&](int i) { return values[static_cast<std::size_t>(i)]; };
    S triple = S(0);
    for (int r = 0; r < N; ++r) {
      for (int s = 0; s < N; ++s) {
        if (s == r) continue;
        for (int t = 0; t < N; ++t) {
          if (t == r || t == s) continue;
          std::vector<int> drop = {r, s, t};
          std::vector<S> reduced = detail::drop_indices(values, drop);
          std::vector<S> e_red = esp_all(std::span<const S>(reduced.data(), reduced.size()));
          S drs = S(value_at(r) - value_at(s));
          S drt = S(value_at(r) - value_at(t));
          S ksum = S(0);
          for (int k = 3; k <= n; ++k) {
            mpq_class w = second_order_weight_esp(k, n, N);
            S term = S(detail::pow_scalar(mean, n - k) * e_red[static_cast<std::size_t>(k - 3)]);
            ksum = S(ksum + scale_ratio(term, w.get_num(), w.get_den()));
          }
          triple = S(triple + S(drs * drs) * drt * ksum);
        }
      }
    }
    S quad = S(0);
    if (n > 3) {
      for (int q = 0; q < N; ++q) {
        for (int r = 0; r < N; ++r) {
          if (r == q) continue;
          for (int s = 0; s < N; ++s) {
            if (s == q || s == r) continue;
            for (int t = 0; t < N; ++t) {
              if (t == q || t == r || t == s) continue;
              std::vector<int> drop = {q, r, s, t};
              std::vector<S> reduced = detail::drop_indices(values, drop);
              std::vector<S> e_red =
                  esp_all(std::span<const S>(reduced.data(), reduced.size()));
              S dqr = S(value_at(q) - value_at(r));
              S dst = S(value_at(s) - value_at(t));
              S ksum = S(0);
              for (int k = 4; k <= n; ++k) {
                mpq_class w = second_order_weight_esp(k, n, N);
                S term =
                    S(detail::pow_scalar(mean, n - k) * e_red[static_cast<std::size_t>(k - 4)]);
                ksum = S(ksum + scale_ratio(term, w.get_num(), w.get_den()));
              }
              quad = S(quad + S(dqr * dqr) * S(dst * dst) * ksum);
            }
          }
        }
      }
    }
    mpz_class n2 = mpz_class(N) * N;
    rhs = S(scale_ratio(triple, mpz_class(1), 2 * n2) +
            scale_ratio(quad, mpz_class(1), 8 * n2));
  }
  return detail::finish_report("esp_second_order", lhs, rhs, rel_tol);
}

/// The inclusion-exclusion expansion agrees with direct enumeration.
template <class S>
IdentityReport<S> check_ryser_rectangular(const RectMatrix<S>& z, double rel_tol = 1e-9) {
  S lhs = permanent_ryser(z);
  S rhs = permanent_naive(z);
  return detail::finish_report("ryser_rectangular", lhs, rhs, rel_tol);
}

/// Sign consequence for nonnegative matrices with decreasing columns: every
/// chain step is nonpositive, so p-bar(R+r) <= mean_r p-bar(R) and the
/// permanent is at most N!/(N-n)! times the product of the means. This is an
/// inequality check; `equal` reports whether every sampled inequality holds
/// and `discrepancy` the largest violation.
inline IdentityReport<Rational> check_monotone_column_signs(const RectMatrix<Rational>& z) {
  const int N = z.rows();
  const int n = z.cols();
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < N; ++j) {
      if (z(j, r) < 0 || (j + 1 < N && z(j, r) < z(j + 1, r))) {
        throw std::invalid_argument(
            "check_monotone_column_signs: needs nonnegative decreasing columns");
      }
    }
  }
  ColumnStats<Rational> cs = column_stats(z);
  Rational worst(0);
  bool ok = true;
  auto check_pair = [&](std::span<const int> setR, int col_r) {
    std::vector<int> r_plus = detail::sorted_union(setR, col_r);
    Rational lhs = injection_sum(z, std::span<const int>(r_plus));
    Rational rhs =
        Rational(cs.mean[static_cast<std::size_t>(col_r)] * injection_sum(z, setR));
    if (lhs > rhs) {
      ok = false;
      worst = std::max(worst, Rational(lhs - rhs));
    }
  };
  for (int r = 0; r < n; ++r) {
    check_pair(std::vector<int>{}, r);  // empty chain start
    for (int s = 0; s < n; ++s) {
      if (s != r) check_pair(std::vector<int>{s}, r);
    }
    std::vector<int> rest = detail::complement(n, std::vector<int>{r});
    check_pair(std::span<const int>(rest), r);
  }
  std::vector<int> all = detail::complement(n, std::vector<int>{});
  Rational per = injection_sum(z, std::span<const int>(all));
  Rational bound = scale_ratio(mean_product(cs.mean, std::span<const int>(all)),
                               factorial_mpz(N), factorial_mpz(N - n));
  if (per > bound) {
    ok = false;
    worst = std::max(worst, Rational(per - bound));
  }
  IdentityReport<Rational> rep{"monotone_column_signs", per, bound, ok,
                               ExtReal(std::fabs(worst.get_d())), ExtReal(0.0)};
  return rep;
}

}  // namespace permlab
