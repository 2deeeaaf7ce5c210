#pragma once

#include <cmath>
#include <utility>

#include "errors.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace stochastik {
namespace dist {

// Inverse-CDF exponential sample; uses log(1-U) so U = 0 is harmless.
inline double sample_exponential(double rate, RngStream& rng) {
  if (rate <= 0) throw Error(ErrorCode::NonPositiveRate, "exponential rate must be positive");
  return -std::log1p(-rng.uniform01()) / rate;
}

// Box-Muller pair of independent standard normals.
inline std::pair<double, double> sample_normal_pair(RngStream& rng) {
  const double radius = std::sqrt(-2.0 * std::log1p(-rng.uniform01()));
  const double angle = 2.0 * M_PI * rng.uniform01();
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

inline Rational pmf_binomial(long n, const Rational& q, long k) {
  if (n < 0 || k < 0 || k > n) throw Error(ErrorCode::DomainError, "binomial pmf domain");
  if (q < 0 || q > 1) throw Error(ErrorCode::DomainError, "success probability outside [0,1]");
  Rational result(binomial_coefficient(n, k), 1);
  for (long i = 0; i < k; ++i) result *= q;
  for (long i = 0; i < n - k; ++i) result *= (Rational(1) - q);
  return result;
}

// Log-space evaluation keeps large-lambda and large-k cases finite.
inline double pmf_poisson(double lambda, long k) {
  if (lambda <= 0) throw Error(ErrorCode::DomainError, "poisson rate must be positive");
  if (k < 0) throw Error(ErrorCode::DomainError, "poisson pmf needs k >= 0");
  return std::exp(double(k) * std::log(lambda) - lambda - std::lgamma(double(k) + 1));
}

struct L1ComparisonResult {
  double distance;  // sum_k |binomial(k) - poisson(k)|
  double bound;     // 2 n q^2
};

// L1 distance between the binomial(n,q) law and the Poisson(nq) law, together
// with the coupling bound 2nq^2 it always satisfies. The sum is truncated
// where both remaining tails are below 1e-15; the cut-off tail masses are
// added back so the reported distance is an upper value within that slack.
inline L1ComparisonResult l1_binomial_poisson(long n, const Rational& q) {
  if (q < 0 || q > 1) throw Error(ErrorCode::DomainError, "success probability outside [0,1]");
  const double lambda = to_double(q) * double(n);
  L1ComparisonResult out{0.0, to_double(Rational(2 * n) * q * q)};
  if (q == 0) return out;
  if (q == 1) {  // point mass at n
    out.distance = 2.0 * (1.0 - pmf_poisson(lambda, n));
    return out;
  }

  const Rational complement = Rational(1) - q;
  Rational binomial_term = pmf_binomial(n, q, 0);
  double binomial_mass = 0.0, poisson_mass = 0.0;
  for (long k = 0;; ++k) {
    const double b = k <= n ? to_double(binomial_term) : 0.0;
    const double p = pmf_poisson(lambda, k);
    out.distance += std::fabs(b - p);
    binomial_mass += b;
    poisson_mass += p;
    const bool past_modes = double(k) > lambda && Rational(k) > Rational(n) * q;
    if (past_modes && 1.0 - binomial_mass < 1e-15 && 1.0 - poisson_mass < 1e-15) break;
    if (k > n + 1000 && past_modes) break;
    if (k < n && complement != 0)
      binomial_term = binomial_term * Rational(n - k, k + 1) * q / complement;
    else if (k >= n)
      binomial_term = 0;
  }
  out.distance += std::max(0.0, 1.0 - binomial_mass) + std::max(0.0, 1.0 - poisson_mass);
  if (out.distance > out.bound * (1 + 1e-12) + 1e-12)
    throw Error(ErrorCode::DomainError, "l1 distance exceeded its coupling bound; numerical bug");
  return out;
}

// Density of a sum of `shape` independent exponentials of the given rate.
inline double gamma_pdf(double rate, long shape, double x) {
  if (rate <= 0 || shape < 1) throw Error(ErrorCode::DomainError, "gamma parameters");
  if (x < 0) throw Error(ErrorCode::DomainError, "gamma density needs x >= 0");
  if (x == 0) return shape == 1 ? rate : 0.0;
  return std::exp(double(shape) * std::log(rate) + double(shape - 1) * std::log(x) - rate * x -
                  std::lgamma(double(shape)));
}

inline double sample_gamma(double rate, long shape, RngStream& rng) {
  double sum = 0.0;
  for (long i = 0; i < shape; ++i) sum += sample_exponential(rate, rng);
  return sum;
}

// Poisson sample: for moderate rates, count exponential interarrivals within
// one unit of time; for large rates, invert the CDF in log space.
inline long sample_poisson(double lambda, RngStream& rng) {
  if (lambda <= 0) throw Error(ErrorCode::DomainError, "poisson rate must be positive");
  if (lambda <= 30.0) {
    long count = -1;
    double time = 0.0;
    while (time <= 1.0) {
      time += sample_exponential(lambda, rng);
      ++count;
    }
    return count;
  }
  const double u = rng.uniform01();
  double log_pmf = -lambda;  // k = 0
  double cdf = 0.0;
  for (long k = 0; k < 10000000; ++k) {
    if (log_pmf > -745.0) cdf += std::exp(log_pmf);
    if (u < cdf) return k;
    log_pmf += std::log(lambda) - std::log(double(k) + 1);
  }
  throw Error(ErrorCode::ConvergenceFailure, "poisson inversion ran away");
}

}  // namespace dist
}  // namespace stochastik
