#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "stats.hpp"

namespace stochastik {
namespace walk {

// Exact law of one symmetric-walk quantity; zero off the stored support.
struct WalkLaw {
  int dimension;
  long horizon;
  std::map<long, Rational> law;

  Rational at(long key) const {
    auto it = law.find(key);
    return it == law.end() ? Rational(0) : it->second;
  }
};

// P(X_n = k) for the 1d symmetric walk: centered binomial on {-n,-n+2,...,n}.
inline WalkLaw position_law_1d(long n) {
  if (n < 0) throw Error(ErrorCode::BadInput, "horizon must be >= 0");
  WalkLaw result{1, n, {}};
  const BigInt denom = integer_pow(2, n);
  for (long k = -n; k <= n; k += 2)
    result.law[k] = Rational(binomial_coefficient(n, (n + k) / 2), denom);
  return result;
}

// P(first return to the origin happens at step n): zero for odd n, and equal
// to P(X_{n-2} = 0)/n for even n.
inline Rational return_time_law(long n) {
  if (n < 1) throw Error(ErrorCode::BadInput, "return time needs n >= 1");
  if (n % 2 == 1) return 0;
  const long m = (n - 2) / 2;
  Rational p_return(binomial_coefficient(n - 2, m), integer_pow(2, n - 2));
  return p_return / n;
}

// P(first passage through level i happens at step n) = (|i|/n) P(X_n = i).
inline Rational first_passage_law(long level, long n) {
  if (level == 0) throw Error(ErrorCode::BadInput, "first passage level must be nonzero");
  if (n < 1) throw Error(ErrorCode::BadInput, "first passage needs n >= 1");
  const long distance = level < 0 ? -level : level;
  if (n < distance || (n - distance) % 2 != 0) return 0;
  Rational p_at(binomial_coefficient(n, (n + distance) / 2), integer_pow(2, n));
  return Rational(distance, n) * p_at;
}

namespace detail {

// Exact 3d return probability by convolving the 6-neighbor kernel over an
// integer lattice box. Memory grows as (4m+1)^3 path-count cells, so this
// route is only for small m; the float diagnostic below covers large m.
inline Rational return_probability_3d_convolution(long m) {
  const long steps = 2 * m;
  const long radius = steps;
  const long side = 2 * radius + 1;
  auto index = [&](long x, long y, long z) {
    return ((x + radius) * side + (y + radius)) * side + (z + radius);
  };
  std::vector<BigInt> counts(side * side * side, 0), next(side * side * side, 0);
  counts[index(0, 0, 0)] = 1;
  for (long step = 1; step <= steps; ++step) {
    std::fill(next.begin(), next.end(), BigInt(0));
    const long reach = step;
    for (long x = -reach; x <= reach; ++x)
      for (long y = -reach + std::labs(x); y <= reach - std::labs(x); ++y)
        for (long z = -reach + std::labs(x) + std::labs(y);
             z <= reach - std::labs(x) - std::labs(y); ++z) {
          BigInt acc = 0;
          if (x > -radius) acc += counts[index(x - 1, y, z)];
          if (x < radius) acc += counts[index(x + 1, y, z)];
          if (y > -radius) acc += counts[index(x, y - 1, z)];
          if (y < radius) acc += counts[index(x, y + 1, z)];
          if (z > -radius) acc += counts[index(x, y, z - 1)];
          if (z < radius) acc += counts[index(x, y, z + 1)];
          if (!acc.is_zero()) next[index(x, y, z)] = acc;
        }
    counts.swap(next);
  }
  return Rational(counts[index(0, 0, 0)], integer_pow(6, steps));
}

// Same value through the axis decomposition: split the 2m steps over the
// three axes, each axis walk returning to zero. Used as the large-m float
// path and as an independent cross-check of the convolution.
inline double log_return_probability_3d(long m) {
  const double log6 = std::log(6.0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve((m + 1) * (m + 2) / 2);
  for (long i = 0; i <= m; ++i)
    for (long j = 0; j <= m - i; ++j) {
      long k = m - i - j;
      // log of (2m)! / (i! i! j! j! k! k!)
      double log_term = std::lgamma(2.0 * m + 1) - 2 * std::lgamma(i + 1.0) -
                        2 * std::lgamma(j + 1.0) - 2 * std::lgamma(k + 1.0);
      terms.push_back(log_term);
      best = std::max(best, log_term);
    }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - best);
  return best + std::log(sum) - 2.0 * m * log6;
}

inline Rational return_probability_3d_axis_split(long m) {
  Rational total = 0;
  for (long i = 0; i <= m; ++i)
    for (long j = 0; j <= m - i; ++j) {
      long k = m - i - j;
      BigInt multinomial =
          factorial(2 * m) / (factorial(i) * factorial(i) * factorial(j) * factorial(j) *
                              factorial(k) * factorial(k));
      total += Rational(multinomial, 1);
    }
  return total / Rational(integer_pow(6, 2 * m), 1);
}

}  // namespace detail

// Exact P_0(X_{2m} = 0) in dimension d (1, 2, or 3).
inline Rational origin_return_probability(long m, int d) {
  if (m < 0) throw Error(ErrorCode::BadInput, "m must be >= 0");
  switch (d) {
    case 1:
      return Rational(binomial_coefficient(2 * m, m), integer_pow(2, 2 * m));
    case 2: {
      BigInt c = binomial_coefficient(2 * m, m);
      return Rational(c * c, integer_pow(4, 2 * m));
    }
    case 3:
      return detail::return_probability_3d_convolution(m);
    default:
      throw Error(ErrorCode::BadInput, "dimension must be 1, 2, or 3");
  }
}

// log P_0(X_{2m} = 0), float evaluation for large horizons.
inline double log_origin_return_probability(long m, int d) {
  switch (d) {
    case 1:
      return log_choose(2 * m, m) - 2.0 * m * std::log(2.0);
    case 2:
      return 2.0 * log_choose(2 * m, m) - 2.0 * m * std::log(4.0);
    case 3:
      return detail::log_return_probability_3d(m);
    default:
      throw Error(ErrorCode::BadInput, "dimension must be 1, 2, or 3");
  }
}

struct RecurrenceDiagnostic {
  int dimension;
  long horizon;                      // M
  std::vector<double> return_probs;  // P_0(X_{2m}=0), m = 1..M
  std::vector<double> partial_sums;  // running sum of return_probs
  double fitted_exponent;            // slope of log P vs log m on m in [M/2, M]
  bool recurrent_verdict;            // exponent >= -1 (heuristic fit, not a proof)
};

inline RecurrenceDiagnostic recurrence_diagnostic(int d, long horizon) {
  if (horizon < 4) throw Error(ErrorCode::BadInput, "horizon too small for a fit");
  RecurrenceDiagnostic diag{d, horizon, {}, {}, 0.0, false};
  diag.return_probs.reserve(horizon);
  diag.partial_sums.reserve(horizon);
  double acc = 0.0;
  std::vector<double> log_m, log_p;
  for (long m = 1; m <= horizon; ++m) {
    double lp = log_origin_return_probability(m, d);
    double p = std::exp(lp);
    acc += p;
    diag.return_probs.push_back(p);
    diag.partial_sums.push_back(acc);
    if (m >= horizon / 2) {
      log_m.push_back(std::log(double(m)));
      log_p.push_back(lp);
    }
  }
  diag.fitted_exponent = least_squares_slope(log_m, log_p);
  diag.recurrent_verdict = diag.fitted_exponent >= -1.0;
  return diag;
}

}  // namespace walk
}  // namespace stochastik
