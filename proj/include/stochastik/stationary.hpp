#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "linalg.hpp"

namespace stochastik {

// Unique invariant distribution of an irreducible chain, from the null space
// of (P^T - I) with one equation swapped for the normalization row.
template <typename T>
Distribution<T> stationary_distribution(const StochasticMatrix<T>& p) {
  if (!classify(p, 1).irreducible)
    throw Error(ErrorCode::NotIrreducible, "stationary distribution needs an irreducible chain");
  const std::size_t n = p.size();
  Matrix<T> base = p.matrix().transpose();
  for (std::size_t i = 0; i < n; ++i) base(i, i) -= T(1);

  for (std::size_t replaced = 0; replaced < n; ++replaced) {
    Matrix<T> system = base;
    std::vector<T> rhs(n, T(0));
    for (std::size_t j = 0; j < n; ++j) system(replaced, j) = T(1);
    rhs[replaced] = T(1);
    auto solution = solve_linear_system(system, rhs);
    if (!solution) continue;
    bool nonnegative = true;
    for (const T& x : *solution)
      if (x < T(0)) nonnegative = false;
    if (!nonnegative) continue;
    return Distribution<T>(std::move(*solution));
  }
  throw Error(ErrorCode::DegenerateNullSpace, "no normalized solution of pi P = pi");
}

template <typename T>
struct StationaryResult {
  Distribution<T> pi;
  std::optional<Matrix<T>> limit_matrix;  // all rows pi; regular chains only
  std::vector<T> recurrence_times;        // 1 / pi_i
};

template <typename T>
std::vector<T> mean_recurrence_times(const Distribution<T>& pi) {
  std::vector<T> times(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] == T(0)) throw Error(ErrorCode::ZeroMass, "state with zero stationary mass");
    times[i] = T(1) / pi[i];
  }
  return times;
}

template <typename T>
StationaryResult<T> stationary_analysis(const StochasticMatrix<T>& p) {
  Distribution<T> pi = stationary_distribution(p);
  StationaryResult<T> result{pi, std::nullopt, mean_recurrence_times(pi)};
  if (classify(p).regular) {
    Matrix<T> limit(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < p.size(); ++j) limit(i, j) = pi[j];
    result.limit_matrix = std::move(limit);
  }
  return result;
}

template <typename T>
struct ReversibilityCertificate {
  bool reversible = false;
  std::vector<T> weights;             // normalized detailed-balance vector when reversible
  std::pair<int, int> violation{-1, -1};  // offending ordered pair otherwise
};

namespace detail {

// Propagates weights along a spanning tree of the positive-rate graph from
// weight(0)=1, then checks the balance identity on every ordered pair.
// rate(i,j) must be nonnegative with rate(i,j) > 0 iff there is an i->j edge.
template <typename T, typename RateFn>
ReversibilityCertificate<T> balance_certificate(std::size_t n, RateFn rate) {
  ReversibilityCertificate<T> cert;
  std::vector<T> weight(n, T(0));
  weight[0] = T(1);
  std::vector<char> visited(n, 0);
  visited[0] = 1;
  std::vector<std::size_t> queue{0};
  std::size_t head = 0;
  while (head < queue.size()) {
    std::size_t u = queue[head++];
    for (std::size_t v = 0; v < n; ++v) {
      if (visited[v]) continue;
      const T forward = rate(u, v);
      const T backward = rate(v, u);
      if (forward == T(0) && backward == T(0)) continue;
      if (forward == T(0) || backward == T(0)) {
        cert.violation = {static_cast<int>(u), static_cast<int>(v)};
        return cert;
      }
      weight[v] = weight[u] * forward / backward;
      visited[v] = 1;
      queue.push_back(v);
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const T lhs = weight[i] * rate(i, j);
      const T rhs = weight[j] * rate(j, i);
      bool equal = scalar_traits<T>::exact
                       ? (lhs == rhs)
                       : (scalar_traits<T>::abs(lhs - rhs) <= scalar_traits<T>::tolerance());
      if (!equal) {
        cert.violation = {static_cast<int>(i), static_cast<int>(j)};
        return cert;
      }
    }

  T total(0);
  for (const T& w : weight) total += w;
  for (T& w : weight) w = w / total;
  cert.reversible = true;
  cert.weights = std::move(weight);
  return cert;
}

}  // namespace detail

template <typename T>
ReversibilityCertificate<T> reversible_vector(const StochasticMatrix<T>& p) {
  if (!classify(p, 1).irreducible)
    throw Error(ErrorCode::NotIrreducible, "reversibility check needs an irreducible chain");
  return detail::balance_certificate<T>(p.size(),
                                        [&](std::size_t i, std::size_t j) { return p(i, j); });
}

// (1/n) E_nu[ sum_{m<n} reward(X_m) ], computed by distribution iteration.
template <typename T>
T ergodic_average(const StochasticMatrix<T>& p, const Distribution<T>& initial,
                  const std::vector<T>& reward, long steps) {
  if (reward.size() != p.size() || initial.size() != p.size())
    throw Error(ErrorCode::DimensionMismatch, "reward/initial size mismatch");
  if (steps < 1) throw Error(ErrorCode::BadInput, "steps must be >= 1");
  std::vector<T> current = initial.probs();
  T total(0);
  for (long m = 0; m < steps; ++m) {
    for (std::size_t i = 0; i < current.size(); ++i) total += current[i] * reward[i];
    if (m + 1 < steps) current = current * p.matrix();
  }
  return total / T(steps);
}

struct SpectralGapResult {
  double subdominant_modulus;  // largest |eigenvalue| < 1
  double gap;                  // 1 - modulus
  long iterations;
};

// Largest-modulus eigenvalue on the complement of the constant vector, by
// power iteration in the pi-weighted inner product. Restricted to reversible
// chains, where the transition operator is self-adjoint and the iteration's
// norm ratio converges to |lambda_0| even with paired +/- eigenvalues.
inline SpectralGapResult spectral_gap(const StochasticMatrix<double>& p,
                                      const Distribution<double>& pi, double tolerance = 1e-10,
                                      long max_iterations = 100000) {
  const std::size_t n = p.size();
  if (pi.size() != n) throw Error(ErrorCode::DimensionMismatch, "pi size mismatch");
  {
    auto cert = reversible_vector(p);
    if (!cert.reversible)
      throw Error(ErrorCode::NotReversible,
                  "spectral gap via the variational form needs a reversible chain");
  }
  if (n == 1) return {0.0, 1.0, 0};

  auto dot_pi = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += pi[i] * a[i] * b[i];
    return s;
  };
  auto deflate = [&](std::vector<double>& v) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += pi[i] * v[i];
    for (double& x : v) x -= mean;
  };
  auto apply = [&](const std::vector<double>& v) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i] += p(i, j) * v[j];
    return out;
  };

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::cos(1.7 * double(i) + 0.3);
  deflate(v);
  double norm = std::sqrt(dot_pi(v, v));
  if (norm == 0.0) {
    v.assign(n, 0.0);
    v[0] = 1.0;
    deflate(v);
    norm = std::sqrt(dot_pi(v, v));
  }
  for (double& x : v) x /= norm;

  double estimate = 0.0;
  for (long it = 1; it <= max_iterations; ++it) {
    std::vector<double> w = apply(v);
    deflate(w);
    double wn = std::sqrt(dot_pi(w, w));
    if (wn < 1e-150) return {0.0, 1.0, it};
    double previous = estimate;
    estimate = wn;  // ||P v||_pi with ||v||_pi = 1
    for (double& x : w) x /= wn;
    v = std::move(w);
    if (it > 1 && std::fabs(estimate - previous) < tolerance)
      return {estimate, 1.0 - estimate, it};
  }
  throw Error(ErrorCode::ConvergenceFailure, "power iteration did not converge");
}

}  // namespace stochastik
