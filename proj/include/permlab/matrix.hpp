#pragma once

#include <cassert>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "permlab/combinatorics.hpp"
#include "permlab/scalar.hpp"

namespace permlab {

/// Rectangular N x n matrix with N >= n >= 1, row-major, 0-based indices.
/// Values are immutable in spirit: operations below never mutate a matrix.
template <class Scalar>
class RectMatrix {
 public:
  RectMatrix(int rows, int cols)
      : rows_(rows),
        cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    if (cols < 1 || rows < cols) {
      throw std::invalid_argument("RectMatrix requires 1 <= cols <= rows");
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Scalar& operator()(int j, int r) const {
    assert(j >= 0 && j < rows_ && r >= 0 && r < cols_);
    return data_[static_cast<std::size_t>(j) * cols_ + r];
  }
  Scalar& operator()(int j, int r) {
    assert(j >= 0 && j < rows_ && r >= 0 && r < cols_);
    return data_[static_cast<std::size_t>(j) * cols_ + r];
  }

  friend bool operator==(const RectMatrix& a, const RectMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_;
  int cols_;
  std::vector<Scalar> data_;
};

template <class Scalar>
RectMatrix<Scalar> make_matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
  int nr = static_cast<int>(rows.size());
  int nc = nr > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  RectMatrix<Scalar> m(nr, nc);
  int j = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != nc) {
      throw std::invalid_argument("make_matrix: ragged rows");
    }
    int r = 0;
    for (const auto& v : row) m(j, r++) = v;
    ++j;
  }
  return m;
}

/// Convenience for tests and families: rational matrix from integer rows.
inline RectMatrix<Rational> make_rational_matrix(
    std::initializer_list<std::initializer_list<long>> rows) {
  int nr = static_cast<int>(rows.size());
  int nc = nr > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  RectMatrix<Rational> m(nr, nc);
  int j = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != nc) {
      throw std::invalid_argument("make_rational_matrix: ragged rows");
    }
    int r = 0;
    for (long v : row) m(j, r++) = Rational(v);
    ++j;
  }
  return m;
}

inline RectMatrix<Complex> to_complex(const RectMatrix<Rational>& z) {
  RectMatrix<Complex> out(z.rows(), z.cols());
  for (int j = 0; j < z.rows(); ++j) {
    for (int r = 0; r < z.cols(); ++r) out(j, r) = Complex(z(j, r).get_d(), 0.0);
  }
  return out;
}

/// Column means and per-cell residuals (entry minus its column mean).
/// Residual columns sum to zero, exactly so in the rational domain.
template <class Scalar>
struct ColumnStats {
  std::vector<Scalar> mean;      // one per column
  RectMatrix<Scalar> residual;   // same shape as the input
};

template <class Scalar>
ColumnStats<Scalar> column_stats(const RectMatrix<Scalar>& z) {
  const int N = z.rows();
  const int n = z.cols();
  ColumnStats<Scalar> cs{std::vector<Scalar>(static_cast<std::size_t>(n)),
                         RectMatrix<Scalar>(N, n)};
  for (int r = 0; r < n; ++r) {
    Scalar sum = Scalar(0);
    for (int j = 0; j < N; ++j) sum = Scalar(sum + z(j, r));
    cs.mean[static_cast<std::size_t>(r)] = scale_ratio(sum, mpz_class(1), mpz_class(N));
  }
  for (int j = 0; j < N; ++j) {
    for (int r = 0; r < n; ++r) {
      cs.residual(j, r) = Scalar(z(j, r) - cs.mean[static_cast<std::size_t>(r)]);
    }
  }
  return cs;
}

/// Difference of two entries in the same column, z(u,r) - z(v,r).
template <class Scalar>
Scalar pair_diff(const RectMatrix<Scalar>& z, int u, int v, int r) {
  if (u < 0 || u >= z.rows() || v < 0 || v >= z.rows() || r < 0 || r >= z.cols()) {
    throw std::out_of_range("pair_diff: index out of range");
  }
  return Scalar(z(u, r) - z(v, r));
}

/// Product of z(assign[r], r) over the listed columns; empty list gives 1.
/// assign is a full-width slot vector (-1 marks unassigned columns).
template <class Scalar>
Scalar injection_product(const RectMatrix<Scalar>& z, std::span<const int> assign,
                         std::span<const int> cols) {
  Scalar p = Scalar(1);
  for (int r : cols) {
    if (r < 0 || r >= z.cols() || assign[static_cast<std::size_t>(r)] < 0) {
      throw std::out_of_range("injection_product: column not covered by the injection");
    }
    p = Scalar(p * z(assign[static_cast<std::size_t>(r)], r));
  }
  return p;
}

/// Sum of the column-subset products over all injective n-tuples of rows.
/// The empty subset gives the number of injections, N!/(N-n)!; the full
/// column set gives the permanent.
template <class Scalar>
Scalar injection_sum(const RectMatrix<Scalar>& z, std::span<const int> cols) {
  for (int r : cols) {
    if (r < 0 || r >= z.cols()) throw std::out_of_range("injection_sum: bad column");
  }
  Scalar total = Scalar(0);
  for_each_injection(z.rows(), z.cols(), [&](std::span<const int> j) {
    Scalar p = Scalar(1);
    for (int r : cols) p = Scalar(p * z(j[static_cast<std::size_t>(r)], r));
    total = Scalar(total + p);
  });
  return total;
}

/// Product of the column means over the listed columns; empty list gives 1.
template <class Scalar>
Scalar mean_product(std::span<const Scalar> means, std::span<const int> cols) {
  Scalar p = Scalar(1);
  for (int r : cols) p = Scalar(p * means[static_cast<std::size_t>(r)]);
  return p;
}

template <class Scalar>
Scalar mean_product(const std::vector<Scalar>& means, std::span<const int> cols) {
  return mean_product(std::span<const Scalar>(means.data(), means.size()), cols);
}

/// True when every entry is 0 or 1 (exactly).
template <class Scalar>
bool is_zero_one(const RectMatrix<Scalar>& z) {
  for (int j = 0; j < z.rows(); ++j) {
    for (int r = 0; r < z.cols(); ++r) {
      if (!(z(j, r) == Scalar(0) || z(j, r) == Scalar(1))) return false;
    }
  }
  return true;
}

/// True when every entry has modulus at most 1.
template <class Scalar>
bool in_unit_disc(const RectMatrix<Scalar>& z) {
  using T = scalar_traits<Scalar>;
  for (int j = 0; j < z.rows(); ++j) {
    for (int r = 0; r < z.cols(); ++r) {
      if (T::norm_sq(z(j, r)) > typename T::real_type(1)) return false;
    }
  }
  return true;
}

}  // namespace permlab
