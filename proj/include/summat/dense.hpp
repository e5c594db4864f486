#pragma once

#include <algorithm>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "summat/scalar.hpp"

namespace summat {

template <Field F>
using Vector = std::vector<F>;

/// Row-major dense matrix over a scalar field.
template <Field F>
class DenseMatrix {
 public:
  using traits = scalar_traits<F>;

  DenseMatrix() = default;
  DenseMatrix(index_t rows, index_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, traits::zero()) {}

  static DenseMatrix identity(index_t n) {
    DenseMatrix m(n, n);
    for (index_t i = 0; i < n; ++i) m(i, i) = traits::one();
    return m;
  }

  index_t rows() const noexcept { return rows_; }
  index_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  F& operator()(index_t i, index_t j) { return data_[i * cols_ + j]; }
  const F& operator()(index_t i, index_t j) const { return data_[i * cols_ + j]; }

  std::span<const F> row(index_t i) const {
    return std::span<const F>(data_.data() + i * cols_, cols_);
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    require_same_shape(o);
    for (index_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    require_same_shape(o);
    for (index_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseMatrix& operator*=(const F& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  /// this += s * o
  void add_scaled(const F& s, const DenseMatrix& o) {
    require_same_shape(o);
    if (traits::is_zero(s)) return;
    for (index_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(const F& s, DenseMatrix a) { return a *= s; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    DenseMatrix out(a.rows_, b.cols_);
    for (index_t i = 0; i < a.rows_; ++i) {
      for (index_t k = 0; k < a.cols_; ++k) {
        const F& aik = a(i, k);
        if (traits::is_zero(aik)) continue;
        for (index_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  Vector<F> apply(std::span<const F> x) const {
    if (x.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
    Vector<F> y(rows_, traits::zero());
    for (index_t i = 0; i < rows_; ++i) {
      for (index_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    }
    return y;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Operator norm induced by the sup norm: the maximum absolute row sum.
  double sup_norm() const {
    double best = 0.0;
    for (index_t i = 0; i < rows_; ++i) {
      F s = traits::zero();
      for (index_t j = 0; j < cols_; ++j) s += traits::abs((*this)(i, j));
      best = std::max(best, traits::to_double(s));
    }
    return best;
  }

  double max_abs_entry() const {
    double best = 0.0;
    for (const auto& v : data_) best = std::max(best, traits::to_double(traits::abs(v)));
    return best;
  }

  void check_finite(const char* where) const {
    for (const auto& v : data_) traits::checked(v, where);
  }

  /// Row-major CSV; exact rationals as "p/q", floats as shortest round-trip.
  void write_csv(std::ostream& os) const {
    for (index_t i = 0; i < rows_; ++i) {
      for (index_t j = 0; j < cols_; ++j) {
        if (j) os << ',';
        os << traits::to_string((*this)(i, j));
      }
      os << '\n';
    }
  }

 private:
  void require_same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("shape mismatch");
  }

  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<F> data_;
};

/// Square truncation of an infinite lower-triangular matrix.
template <Field F>
using DenseBlock = DenseMatrix<F>;

template <Field F>
double max_abs_diff(const DenseMatrix<F>& a, const DenseMatrix<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch");
  double best = 0.0;
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j)
      best = std::max(best, scalar_traits<F>::to_double(scalar_traits<F>::abs(a(i, j) - b(i, j))));
  return best;
}

template <Field F>
double sup_norm(std::span<const F> x) {
  double best = 0.0;
  for (const auto& v : x) best = std::max(best, scalar_traits<F>::to_double(scalar_traits<F>::abs(v)));
  return best;
}

}  // namespace summat
