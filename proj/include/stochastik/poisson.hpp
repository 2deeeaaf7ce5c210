#pragma once

#include <algorithm>
#include <vector>

#include "distributions.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace stochastik {
namespace poisson {

// Event times of one realization on (0, T], strictly increasing.
struct PointProcessSample {
  double horizon = 0.0;
  double rate = 0.0;  // metadata; thinning and superposition update it
  std::vector<double> times;

  long count_up_to(double t) const {
    return static_cast<long>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
  }
};

// Cumulative sums of exponential waiting times until the horizon is passed.
inline PointProcessSample sample_poisson_process(double rate, double horizon, RngStream& rng) {
  if (rate <= 0) throw Error(ErrorCode::NonPositiveRate, "rate must be positive");
  if (horizon <= 0) throw Error(ErrorCode::BadInput, "horizon must be positive");
  PointProcessSample sample{horizon, rate, {}};
  double t = dist::sample_exponential(rate, rng);
  while (t <= horizon) {
    sample.times.push_back(t);
    t += dist::sample_exponential(rate, rng);
  }
  return sample;
}

// Number of events in the half-open window (s, t].
inline long count(const PointProcessSample& sample, double s, double t) {
  if (s < 0 || t < s || t > sample.horizon)
    throw Error(ErrorCode::BadInterval, "need 0 <= s <= t <= horizon");
  return sample.count_up_to(t) - sample.count_up_to(s);
}

// Independent Bernoulli retention of each point.
inline PointProcessSample thin(const PointProcessSample& sample, double keep_prob,
                               RngStream& rng) {
  if (keep_prob < 0 || keep_prob > 1)
    throw Error(ErrorCode::BadInput, "retention probability outside [0,1]");
  PointProcessSample out{sample.horizon, sample.rate * keep_prob, {}};
  for (double t : sample.times)
    if (rng.uniform01() < keep_prob) out.times.push_back(t);
  return out;
}

// Sorted merge of two realizations over the same horizon.
inline PointProcessSample superpose(const PointProcessSample& a, const PointProcessSample& b) {
  if (a.horizon != b.horizon)
    throw Error(ErrorCode::HorizonMismatch, "superposition needs equal horizons");
  PointProcessSample out{a.horizon, a.rate + b.rate, {}};
  out.times.resize(a.times.size() + b.times.size());
  std::merge(a.times.begin(), a.times.end(), b.times.begin(), b.times.end(), out.times.begin());
  for (std::size_t i = 1; i < out.times.size(); ++i)
    if (out.times[i] == out.times[i - 1])
      throw Error(ErrorCode::Collision, "duplicate event timestamp in superposition");
  return out;
}

// Cumulative sums of i.i.d. jumps at the event times.
struct CompoundSample {
  double horizon = 0.0;
  std::vector<double> times;
  std::vector<double> cumulative;  // value of the process from times[i] on

  double value_at(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0.0;
    return cumulative[it - times.begin() - 1];
  }
};

template <typename JumpSampler>
CompoundSample compound(const PointProcessSample& sample, JumpSampler jump, RngStream& rng) {
  CompoundSample out{sample.horizon, sample.times, {}};
  out.cumulative.reserve(sample.times.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < sample.times.size(); ++i) {
    acc += jump(rng);
    out.cumulative.push_back(acc);
  }
  return out;
}

// Variable-intensity process via rejection against a constant bound: sample
// at rate_bound, keep a point at time t with probability rate(t)/rate_bound.
template <typename RateFn>
PointProcessSample sample_inhomogeneous(RateFn rate, double rate_bound, double horizon,
                                        RngStream& rng) {
  if (rate_bound <= 0) throw Error(ErrorCode::NonPositiveRate, "rate bound must be positive");
  PointProcessSample proposal = sample_poisson_process(rate_bound, horizon, rng);
  PointProcessSample out{horizon, rate_bound, {}};
  for (double t : proposal.times) {
    const double r = rate(t);
    if (r < 0 || r > rate_bound)
      throw Error(ErrorCode::BadInput, "rate function escapes [0, rate_bound]");
    if (rng.uniform01() < r / rate_bound) out.times.push_back(t);
  }
  return out;
}

}  // namespace poisson
}  // namespace stochastik
