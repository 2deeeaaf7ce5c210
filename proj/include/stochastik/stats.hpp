#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace stochastik {

inline double log_choose(long n, long k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1);
}

namespace detail {

// Regularized lower incomplete gamma P(a,x) by series expansion.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by continued fraction (Lentz).
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

inline double regularized_gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw Error(ErrorCode::DomainError, "regularized_gamma_q domain");
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

// Survival function of the chi-square law with dof degrees of freedom.
inline double chi_square_sf(double statistic, double dof) {
  return regularized_gamma_q(dof / 2.0, statistic / 2.0);
}

struct ChiSquareReport {
  double statistic;
  double dof;
  double p_value;
};

// Goodness of fit of observed counts against expected probabilities. Cells
// with expected count below min_expected are pooled into the following cell.
inline ChiSquareReport chi_square_gof(const std::vector<double>& observed,
                                      const std::vector<double>& expected_probs,
                                      double total, double min_expected = 5.0) {
  if (observed.size() != expected_probs.size())
    throw Error(ErrorCode::DimensionMismatch, "chi_square_gof bins");
  double stat = 0.0;
  int cells = 0;
  double obs_acc = 0.0, exp_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    obs_acc += observed[i];
    exp_acc += expected_probs[i] * total;
    if (exp_acc >= min_expected || i + 1 == observed.size()) {
      if (exp_acc > 0) {
        stat += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
        ++cells;
      }
      obs_acc = exp_acc = 0.0;
    }
  }
  double dof = std::max(1, cells - 1);
  return {stat, dof, chi_square_sf(stat, dof)};
}

// Asymptotic Kolmogorov survival function with the finite-n correction
// sqrt(n) + 0.12 + 0.11/sqrt(n).
inline double kolmogorov_p_value(double d_statistic, std::size_t n) {
  double sn = std::sqrt(double(n));
  double lambda = (sn + 0.12 + 0.11 / sn) * d_statistic;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::min(1.0, std::max(0.0, sum));
}

struct KsReport {
  double statistic;
  double p_value;
  std::size_t n;
};

// One-sample Kolmogorov-Smirnov test against a continuous CDF.
inline KsReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorCode::InsufficientData, "ks_test with no samples");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = cdf(samples[i]);
    d = std::max(d, std::fabs(f - double(i) / n));
    d = std::max(d, std::fabs(double(i + 1) / n - f));
  }
  return {d, kolmogorov_p_value(d, n), n};
}

// Least-squares slope of y against x.
inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::InsufficientData, "least_squares_slope needs two points");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

inline double lag1_autocorrelation(const std::vector<double>& x) {
  if (x.size() < 3) throw Error(ErrorCode::InsufficientData, "lag1_autocorrelation");
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i + 1 < x.size()) num += (x[i] - mean) * (x[i + 1] - mean);
  }
  return num / den;
}

struct RunningMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double delta = x - mean;
    mean += delta / double(n);
    m2 += delta * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
  double std_error() const { return n > 1 ? std::sqrt(variance() / double(n)) : 0.0; }
};

}  // namespace stochastik
