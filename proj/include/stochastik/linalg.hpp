#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "rational.hpp"

namespace stochastik {

namespace detail {

// Pivot preference. For rationals the pivot with the smallest numerator and
// denominator keeps intermediate entries from ballooning; for doubles the
// usual largest-magnitude rule applies.
inline double pivot_cost(double x) { return x == 0.0 ? -1.0 : -std::fabs(x); }

inline double pivot_cost(const Rational& x) {
  if (x == 0) return -1.0;
  return static_cast<double>(msb(abs(numerator(x))) + msb(denominator(x)));
}

}  // namespace detail

// Solves A x = b by Gaussian elimination. Returns nullopt when A is singular
// (exactly for rationals, pivot below 1e-300 for doubles).
template <typename T>
std::optional<std::vector<T>> solve_linear_system(Matrix<T> a, std::vector<T> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "linear solve shapes");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    double best_cost = 1e300;
    for (std::size_t r = col; r < n; ++r) {
      if (a(r, col) == T(0)) continue;
      double c = detail::pivot_cost(a(r, col));
      if (c < best_cost) {
        best_cost = c;
        best = r;
      }
    }
    if (a(best, col) == T(0)) return std::nullopt;
    if (best != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
      std::swap(b[col], b[best]);
    }
    const T pivot = a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) == T(0)) continue;
      T factor = a(r, col) / pivot;
      a(r, col) = T(0);
      for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= factor * a(col, j);
      b[r] -= factor * b[col];
    }
  }

  std::vector<T> x(n, T(0));
  for (std::size_t i = n; i-- > 0;) {
    T acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

template <typename T>
std::optional<Matrix<T>> invert_matrix(const Matrix<T>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  Matrix<T> inv(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<T> e(n, T(0));
    e[col] = T(1);
    auto x = solve_linear_system(a, e);
    if (!x) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) inv(i, col) = (*x)[i];
  }
  return inv;
}

}  // namespace stochastik
