#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "errors.hpp"

namespace stochastik {

// Minimal dense row-major matrix. Sizes here are small (state spaces, blocks),
// so no effort is spent on blocking or views.
template <typename T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged initializer");
      for (const auto& v : r) data_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool operator==(const Matrix& other) const = default;

  Matrix operator*(const Matrix& other) const {
    if (cols_ != other.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
    Matrix out(rows_, other.cols_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == T(0)) continue;
        for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
      }
    return out;
  }

  Matrix operator+(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
      throw Error(ErrorCode::DimensionMismatch, "matrix sum shapes");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
  }

  Matrix operator-(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
      throw Error(ErrorCode::DimensionMismatch, "matrix difference shapes");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  // row vector * matrix
  friend std::vector<T> operator*(const std::vector<T>& v, const Matrix& m) {
    if (v.size() != m.rows_) throw Error(ErrorCode::DimensionMismatch, "vector-matrix shapes");
    std::vector<T> out(m.cols_, T(0));
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (v[i] == T(0)) continue;
      for (std::size_t j = 0; j < m.cols_; ++j) out[j] += v[i] * m(i, j);
    }
    return out;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> data_;
};

template <typename T>
Matrix<T> matrix_power(Matrix<T> base, unsigned long exp) {
  Matrix<T> result = Matrix<T>::identity(base.rows());
  while (exp > 0) {
    if (exp & 1) result = result * base;
    base = base * base;
    exp >>= 1;
  }
  return result;
}

}  // namespace stochastik
