#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "chain.hpp"
#include "distributions.hpp"
#include "linalg.hpp"
#include "stationary.hpp"

namespace stochastik {
namespace jump {

// Rate matrix of a Markov jump process: nonnegative off-diagonal rates, each
// diagonal entry the negated exit rate, rows summing to zero.
template <typename T>
class Generator {
 public:
  explicit Generator(Matrix<T> rates, std::vector<std::string> labels = {})
      : rates_(std::move(rates)), labels_(std::move(labels)) {
    const std::size_t n = rates_.rows();
    if (n == 0 || rates_.cols() != n)
      throw Error(ErrorCode::DimensionMismatch, "generator must be square, n >= 1");
    if (!labels_.empty() && labels_.size() != n)
      throw Error(ErrorCode::DimensionMismatch, "label count mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      T sum(0);
      for (std::size_t j = 0; j < n; ++j) {
        const T& v = rates_(i, j);
        if (i == j) {
          if (v > T(0)) throw Error(ErrorCode::BadDiagonal, "diagonal entry must be <= 0");
        } else if (v < T(0)) {
          throw Error(ErrorCode::NegativeRate,
                      "rate (" + std::to_string(i) + "," + std::to_string(j) + ") negative");
        }
        sum += v;
      }
      const bool zero = scalar_traits<T>::exact
                            ? (sum == T(0))
                            : (scalar_traits<T>::abs(sum) <= scalar_traits<T>::tolerance());
      if (!zero)
        throw Error(ErrorCode::RowSumNotZero, "row " + std::to_string(i) + " does not sum to 0");
    }
  }

  std::size_t size() const { return rates_.rows(); }
  const T& operator()(std::size_t i, std::size_t j) const { return rates_(i, j); }
  const Matrix<T>& matrix() const { return rates_; }
  const std::vector<std::string>& labels() const { return labels_; }

  T rate(std::size_t i, std::size_t j) const { return i == j ? T(0) : rates_(i, j); }
  T exit_rate(std::size_t i) const { return -rates_(i, i); }

 private:
  Matrix<T> rates_;
  std::vector<std::string> labels_;
};

template <typename T>
Generator<T> validate_generator(Matrix<T> raw, std::vector<std::string> labels = {}) {
  return Generator<T>(std::move(raw), std::move(labels));
}

// Discrete chain of jump destinations; states with zero exit rate are flagged
// absorbing and get a self-loop row.
template <typename T>
struct EmbeddedChain {
  std::vector<T> exit_rates;
  Matrix<T> jump_probs;
  std::vector<bool> absorbing;
};

template <typename T>
EmbeddedChain<T> embedded_chain(const Generator<T>& gen) {
  const std::size_t n = gen.size();
  EmbeddedChain<T> out{std::vector<T>(n), Matrix<T>(n, n, T(0)), std::vector<bool>(n, false)};
  for (std::size_t i = 0; i < n; ++i) {
    out.exit_rates[i] = gen.exit_rate(i);
    if (out.exit_rates[i] == T(0)) {
      out.absorbing[i] = true;
      out.jump_probs(i, i) = T(1);
      continue;
    }
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) out.jump_probs(i, j) = gen.rate(i, j) / out.exit_rates[i];
  }
  return out;
}

// Piecewise-constant path on [0, horizon]: states visited and their entry
// times (times[k] is when states[k] was entered; times[0] = 0).
struct JumpPath {
  double horizon;
  std::vector<double> times;
  std::vector<int> states;

  int state_at(double t) const {
    std::size_t lo = 0, hi = times.size();
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      (times[mid] <= t ? lo : hi) = mid;
    }
    return states[lo];
  }
};

inline JumpPath simulate_jump(const Generator<double>& gen, int start, double horizon,
                              RngStream& rng) {
  if (horizon <= 0) throw Error(ErrorCode::BadInput, "horizon must be positive");
  if (start < 0 || static_cast<std::size_t>(start) >= gen.size())
    throw Error(ErrorCode::BadInput, "start state out of range");
  JumpPath path{horizon, {0.0}, {start}};
  double t = 0.0;
  int current = start;
  const std::size_t n = gen.size();
  while (true) {
    const double exit = gen.exit_rate(current);
    if (exit <= 0.0) break;  // absorbing: parked until the horizon
    t += dist::sample_exponential(exit, rng);
    if (t > horizon) break;
    const double u = rng.uniform01();
    double acc = 0.0;
    int next = current;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == static_cast<std::size_t>(current)) continue;
      acc += gen.rate(current, j) / exit;
      if (u < acc) {
        next = static_cast<int>(j);
        break;
      }
    }
    if (next == current) {  // numerical leftover lands on the last positive rate
      for (std::size_t j = n; j-- > 0;)
        if (j != static_cast<std::size_t>(current) && gen.rate(current, j) > 0) {
          next = static_cast<int>(j);
          break;
        }
    }
    path.times.push_back(t);
    path.states.push_back(next);
    current = next;
  }
  return path;
}

// Fraction of [0, horizon] spent in each state.
inline std::vector<double> occupation_fractions(const JumpPath& path, std::size_t n_states) {
  std::vector<double> time_in(n_states, 0.0);
  for (std::size_t k = 0; k < path.states.size(); ++k) {
    const double start = path.times[k];
    const double end = k + 1 < path.times.size() ? path.times[k + 1] : path.horizon;
    time_in[path.states[k]] += end - start;
  }
  for (double& v : time_in) v /= path.horizon;
  return time_in;
}

// Transition kernel exp(tL) by uniformization: a Poisson(rate_bound * t)
// mixture of powers of the stochastic matrix I + L / rate_bound. Keeps rows
// stochastic by construction; the truncation point covers the Poisson tail
// below `tol`.
inline StochasticMatrix<double> transition_kernel(const Generator<double>& gen, double t,
                                                  double tol = 1e-12, long term_cap = 200000) {
  if (t < 0) throw Error(ErrorCode::BadInput, "time must be >= 0");
  const std::size_t n = gen.size();
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, gen.exit_rate(i));
  if (t == 0.0 || bound == 0.0)
    return StochasticMatrix<double>(Matrix<double>::identity(n), gen.labels());

  Matrix<double> uniformized = Matrix<double>::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) uniformized(i, j) += gen(i, j) / bound;

  const double mean = bound * t;
  Matrix<double> result(n, n, 0.0);
  Matrix<double> power = Matrix<double>::identity(n);
  double log_weight = -mean;  // log Poisson(mean) pmf at k = 0
  double covered = 0.0;
  long k = 0;
  while (covered < 1.0 - tol) {
    if (k > term_cap)
      throw Error(ErrorCode::ToleranceUnachievable, "uniformization truncation cap exceeded");
    const double w = std::exp(log_weight);
    if (w > 0) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) result(i, j) += w * power(i, j);
      covered += w;
    }
    // past the mode the terms shrink geometrically; the ratio bound on the
    // remaining tail certifies coverage even when the float sum has plateaued
    if (double(k) >= mean && k > 0) {
      const double ratio = mean / double(k + 1);
      if (ratio < 1.0 && w * ratio / (1.0 - ratio) < tol) break;
    }
    power = power * uniformized;
    ++k;
    log_weight += std::log(mean) - std::log(double(k));
  }

  // rows each sum to `covered`; scale back to exactly stochastic
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) row_sum += result(i, j);
    for (std::size_t j = 0; j < n; ++j) result(i, j) /= row_sum;
  }
  return StochasticMatrix<double>(std::move(result), gen.labels());
}

template <typename T>
bool is_irreducible(const Generator<T>& gen) {
  Matrix<T> probe(gen.size(), gen.size(), T(0));
  for (std::size_t i = 0; i < gen.size(); ++i) {
    for (std::size_t j = 0; j < gen.size(); ++j)
      if (i != j) probe(i, j) = gen.rate(i, j) > T(0) ? T(1) : T(0);
  }
  // reuse the chain classifier on a synthetic stochastic matrix with the same
  // positive-rate digraph
  Matrix<T> rows(gen.size(), gen.size(), T(0));
  for (std::size_t i = 0; i < gen.size(); ++i) {
    T degree(0);
    for (std::size_t j = 0; j < gen.size(); ++j) degree += probe(i, j);
    if (degree == T(0)) {
      rows(i, i) = T(1);
    } else {
      for (std::size_t j = 0; j < gen.size(); ++j)
        if (probe(i, j) > T(0)) rows(i, j) = T(1) / degree;
    }
  }
  return classify(StochasticMatrix<T>(std::move(rows)), 1).irreducible;
}

// Stationary law: the normalized solution of pi L = 0.
template <typename T>
Distribution<T> stationary_jump(const Generator<T>& gen) {
  if (!is_irreducible(gen))
    throw Error(ErrorCode::NotIrreducible, "stationary law needs an irreducible generator");
  const std::size_t n = gen.size();
  Matrix<T> base = gen.matrix().transpose();
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
  throw Error(ErrorCode::DegenerateNullSpace, "no normalized solution of pi L = 0");
}

// Detailed balance for jump rates, by spanning-tree propagation plus a full
// edge check. A passing certificate's weights form a stationary law.
template <typename T>
ReversibilityCertificate<T> detailed_balance_jump(const Generator<T>& gen) {
  if (!is_irreducible(gen))
    throw Error(ErrorCode::NotIrreducible, "balance check needs an irreducible generator");
  return detail::balance_certificate<T>(gen.size(),
                                        [&](std::size_t i, std::size_t j) { return gen.rate(i, j); });
}

// Closed-form stationary law of a finite birth-death process:
// pi(n) proportional to prod_{k<n} birth(k) / death(k+1).
template <typename T>
Distribution<T> birth_death_stationary(const std::vector<T>& births, const std::vector<T>& deaths) {
  if (births.size() != deaths.size())
    throw Error(ErrorCode::DimensionMismatch, "need birth rates 0..N-1 and death rates 1..N");
  for (const T& b : births)
    if (b <= T(0)) throw Error(ErrorCode::NonPositiveRate, "birth rates must be positive");
  for (const T& d : deaths)
    if (d <= T(0)) throw Error(ErrorCode::NonPositiveRate, "death rates must be positive");
  std::vector<T> weights{T(1)};
  for (std::size_t k = 0; k < births.size(); ++k)
    weights.push_back(weights.back() * births[k] / deaths[k]);
  T total(0);
  for (const T& w : weights) total += w;
  for (T& w : weights) w = w / total;
  return Distribution<T>(std::move(weights));
}

// Infinite birth-death chain, truncated where the remaining mass is provably
// below tail_tol. Weight ratios bounded away from shrinking signal a
// divergent normalizer.
inline std::vector<double> birth_death_stationary_infinite(
    const std::function<double(long)>& birth, const std::function<double(long)>& death,
    double tail_tol = 1e-15, long cap = 1000000) {
  std::vector<double> weights{1.0};
  double total = 1.0;
  for (long n = 1; n <= cap; ++n) {
    const double b = birth(n - 1), d = death(n);
    if (b <= 0 || d <= 0) throw Error(ErrorCode::NonPositiveRate, "rates must be positive");
    const double ratio = b / d;
    const double w = weights.back() * ratio;
    weights.push_back(w);
    total += w;
    if (ratio < 1.0 && w / (1.0 - ratio) < tail_tol * total) {
      for (double& x : weights) x /= total;
      return weights;
    }
  }
  throw Error(ErrorCode::DivergentNormalizer,
              "weight sum did not stabilize; no normalizable stationary law");
}

}  // namespace jump
}  // namespace stochastik
