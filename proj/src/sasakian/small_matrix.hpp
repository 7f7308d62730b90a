#pragma once

// Dense row-major matrices over any scalar that supports field arithmetic,
// including nested duals. Eigen handles the plain-double work elsewhere; this
// exists because the induced structure must be solved for while derivatives
// ride along.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sasakian/dual.hpp"
#include "sasakian/error.hpp"

namespace sasakian {

template <class T>
class SmallMatrix {
 public:
  SmallMatrix() = default;
  SmallMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0.0)) {}

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  [[nodiscard]] std::span<const T> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
std::vector<T> mat_vec(const SmallMatrix<T>& a, std::span<const T> x) {
  std::vector<T> y(a.rows(), T(0.0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

template <class T>
T bilinear(const SmallMatrix<T>& a, std::span<const T> x, std::span<const T> y) {
  T s(0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += x[i] * a(i, j) * y[j];
  return s;
}

template <class T>
T dot(std::span<const T> x, std::span<const T> y) {
  T s(0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// Gaussian elimination with partial pivoting on the innermost real value.
// Solves A X = B for every column of B in place; returns X.
template <class T>
SmallMatrix<T> solve(SmallMatrix<T> a, SmallMatrix<T> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw Error(ErrorCode::dimension_mismatch, "solve: incompatible shapes");
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(value_of(a(i, j))));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(value_of(a(i, k))) > std::abs(value_of(a(piv, k)))) piv = i;
    if (std::abs(value_of(a(piv, k))) <= 1e-14 * scale || scale == 0.0)
      throw Error(ErrorCode::rank_deficient, "solve: matrix is numerically singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t ii = n; ii-- > 0;) {
      T s = b(ii, c);
      for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * b(j, c);
      b(ii, c) = s / a(ii, ii);
    }
  }
  return b;
}

template <class T>
std::vector<T> solve(const SmallMatrix<T>& a, std::span<const T> rhs) {
  SmallMatrix<T> b(rhs.size(), 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) b(i, 0) = rhs[i];
  return solve(a, std::move(b)).column(0);
}

// Determinant by elimination; zero pivots give exactly zero.
template <class T>
T determinant(SmallMatrix<T> a) {
  const std::size_t n = a.rows();
  T det(1.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(value_of(a(i, k))) > std::abs(value_of(a(piv, k)))) piv = i;
    if (value_of(a(piv, k)) == 0.0) return T(0.0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det = det * a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

}  // namespace sasakian
