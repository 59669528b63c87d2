#pragma once

#include <gmpxx.h>

#include <cassert>
#include <span>
#include <stdexcept>
#include <vector>

namespace permlab {

inline mpz_class factorial_mpz(int n) {
  assert(n >= 0);
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

/// n (n-1) ... (n-k+1); equals n!/(n-k)!. Returns 1 for k = 0.
inline mpz_class falling_factorial_mpz(int n, int k) {
  assert(k >= 0 && k <= n);
  mpz_class r = 1;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

/// binom(n, k); zero outside 0 <= k <= n.
inline mpz_class binomial_mpz(int n, int k) {
  if (k < 0 || k > n || n < 0) return mpz_class(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

/// Number of injective n-tuples over N rows, N!/(N-n)!.
inline mpz_class injection_count(int num_rows, int arity) {
  if (arity < 0 || arity > num_rows) return mpz_class(0);
  return falling_factorial_mpz(num_rows, arity);
}

/// Weight (n+k-2)(n-k+1) / (k(k-1)(k-2) binom(n,k)) of the second-order
/// expansion, exact. Requires 3 <= k <= n.
inline mpq_class second_order_weight(int k, int n) {
  if (k < 3 || k > n) throw std::invalid_argument("second_order_weight: need 3 <= k <= n");
  mpq_class q(mpz_class(n + k - 2) * (n - k + 1),
              mpz_class(k) * (k - 1) * (k - 2) * binomial_mpz(n, k));
  q.canonicalize();
  return q;
}

/// Same weight with binom(N,k) in the denominator, for the value-list form.
inline mpq_class second_order_weight_esp(int k, int n, int N) {
  if (k < 3 || k > n || n > N) {
    throw std::invalid_argument("second_order_weight_esp: bad arguments");
  }
  mpq_class q(mpz_class(n + k - 2) * (n - k + 1),
              mpz_class(k) * (k - 1) * (k - 2) * binomial_mpz(N, k));
  q.canonicalize();
  return q;
}

namespace detail {

template <class F>
void subsets_rec(int ground, int k, int start, std::vector<int>& cur, F& visit) {
  if (static_cast<int>(cur.size()) == k) {
    visit(std::span<const int>(cur.data(), cur.size()));
    return;
  }
  int need = k - static_cast<int>(cur.size());
  for (int i = start; i <= ground - need; ++i) {
    cur.push_back(i);
    subsets_rec(ground, k, i + 1, cur, visit);
    cur.pop_back();
  }
}

}  // namespace detail

/// Visits every k-subset of {0,...,ground-1} once, in lexicographic order.
template <class F>
void for_each_subset(int ground, int k, F&& visit) {
  if (k < 0 || k > ground) {
    throw std::invalid_argument("for_each_subset: k out of range");
  }
  std::vector<int> cur;
  cur.reserve(static_cast<std::size_t>(k));
  detail::subsets_rec(ground, k, 0, cur, visit);
}

/// Visits every k-subset of the given (sorted) ground set, lexicographically.
template <class F>
void for_each_subset_of(std::span<const int> ground, int k, F&& visit) {
  if (k < 0 || k > static_cast<int>(ground.size())) {
    throw std::invalid_argument("for_each_subset_of: k out of range");
  }
  std::vector<int> cur;
  cur.reserve(static_cast<std::size_t>(k));
  std::vector<int> out(static_cast<std::size_t>(k));
  auto relabel = [&](std::span<const int> idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out[i] = ground[static_cast<std::size_t>(idx[i])];
    }
    visit(std::span<const int>(out.data(), idx.size()));
  };
  detail::subsets_rec(static_cast<int>(ground.size()), k, 0, cur, relabel);
}

namespace detail {

template <class F>
void assignments_rec(int num_rows, std::span<const int> cols, std::size_t pos,
                     unsigned& used, std::vector<int>& slot, F& visit) {
  if (pos == cols.size()) {
    visit(std::span<const int>(slot.data(), slot.size()));
    return;
  }
  int col = cols[pos];
  for (int row = 0; row < num_rows; ++row) {
    if (used >> row & 1u) continue;
    used |= 1u << row;
    slot[static_cast<std::size_t>(col)] = row;
    assignments_rec(num_rows, cols, pos + 1, used, slot, visit);
    used &= ~(1u << row);
  }
  slot[static_cast<std::size_t>(col)] = -1;
}

}  // namespace detail

/// Visits every injective assignment of the listed columns to rows
/// {0,...,num_rows-1} outside used_rows, filling slot[col] = row.
/// slot must be preset: -1 on the listed columns, fixed rows elsewhere
/// (those fixed rows are the bits of used_rows). Order is lexicographic
/// in the tuple of assigned rows, so floating-point sums are reproducible.
template <class F>
void for_each_assignment(int num_rows, std::span<const int> cols,
                         unsigned used_rows, std::vector<int>& slot, F&& visit) {
  if (num_rows > 31) throw std::invalid_argument("row count exceeds enumerator limit");
  detail::assignments_rec(num_rows, cols, 0, used_rows, slot, visit);
}

/// Visits every injection (j_1,...,j_arity) of distinct rows, lexicographically.
template <class F>
void for_each_injection(int num_rows, int arity, F&& visit) {
  if (arity < 1 || arity > num_rows) {
    throw std::invalid_argument("for_each_injection: need 1 <= arity <= rows");
  }
  std::vector<int> slot(static_cast<std::size_t>(arity), -1);
  std::vector<int> cols(static_cast<std::size_t>(arity));
  for (int i = 0; i < arity; ++i) cols[static_cast<std::size_t>(i)] = i;
  for_each_assignment(num_rows, cols, 0u, slot, visit);
}

}  // namespace permlab
