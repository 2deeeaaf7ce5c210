#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "distributions.hpp"
#include "errors.hpp"
#include "jump.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace stochastik {
namespace queueing {

// Closed-form steady-state summary. W counts waiting before service only;
// sojourn adds the service time. Little's identity ties L to the accepted
// arrival rate: L = throughput * sojourn.
template <typename T>
struct QueueMetrics {
  std::function<T(long)> stationary;  // pi(n), number in system
  T utilization;                      // per-server busy fraction
  T mean_in_system;                   // L
  T mean_wait;                        // W
  T mean_sojourn;
  T wait_probability;                 // arriving (admitted) customer finds no free server
  T throughput;                       // accepted-arrival rate
  std::optional<T> loss_probability;  // finite buffers only
  std::optional<T> mean_busy_servers;
  std::optional<T> conditional_wait_rate;  // W | W>0 is exponential with this rate
};

template <typename T>
QueueMetrics<T> mm1(T lambda, T mu) {
  if (lambda <= T(0) || mu <= T(0))
    throw Error(ErrorCode::NonPositiveRate, "arrival and service rates must be positive");
  if (lambda >= mu)
    throw Error(ErrorCode::StabilityError, "single-server queue needs lambda < mu");
  const T rho = lambda / mu;
  QueueMetrics<T> m;
  m.stationary = [rho](long n) {
    if (n < 0) return T(0);
    T p = T(1) - rho;
    for (long i = 0; i < n; ++i) p *= rho;
    return p;
  };
  m.utilization = rho;
  m.mean_in_system = rho / (T(1) - rho);
  m.mean_wait = lambda / (mu * (mu - lambda));
  m.mean_sojourn = T(1) / (mu - lambda);
  m.wait_probability = rho;
  m.throughput = lambda;
  m.conditional_wait_rate = mu - lambda;
  return m;
}

template <typename T>
QueueMetrics<T> mm1n(T lambda, T mu, long buffer) {
  if (lambda <= T(0) || mu <= T(0))
    throw Error(ErrorCode::NonPositiveRate, "arrival and service rates must be positive");
  if (buffer < 1) throw Error(ErrorCode::BadInput, "buffer must be >= 1");
  const T rho = lambda / mu;
  std::vector<T> pi(buffer + 1);
  if (lambda == mu) {
    for (long n = 0; n <= buffer; ++n) pi[n] = T(1) / T(buffer + 1);
  } else {
    T power(1), total(0);
    for (long n = 0; n <= buffer; ++n) {
      pi[n] = power;
      total += power;
      power *= rho;
    }
    for (auto& p : pi) p = p / total;
  }

  QueueMetrics<T> m;
  m.stationary = [pi](long n) {
    return (n < 0 || n >= static_cast<long>(pi.size())) ? T(0) : pi[n];
  };
  m.loss_probability = pi[buffer];
  m.throughput = lambda * (T(1) - pi[buffer]);
  T mean(0);
  for (long n = 0; n <= buffer; ++n) mean += T(n) * pi[n];
  m.mean_in_system = mean;
  m.utilization = T(1) - pi[0];
  m.mean_sojourn = mean / m.throughput;
  m.mean_wait = m.mean_sojourn - T(1) / mu;
  // an admitted arrival waits unless it finds the system empty
  T admitted(0);
  for (long n = 0; n < buffer; ++n) admitted += pi[n];
  m.wait_probability = (admitted - pi[0]) / admitted;
  return m;
}

template <typename T>
QueueMetrics<T> mms(T lambda, T mu, long servers) {
  if (lambda <= T(0) || mu <= T(0))
    throw Error(ErrorCode::NonPositiveRate, "arrival and service rates must be positive");
  if (servers < 1) throw Error(ErrorCode::BadInput, "server count must be >= 1");
  const T offered = lambda / mu;          // mean busy servers
  const T rho = lambda / (T(servers) * mu);  // per-server utilization
  if (rho >= T(1))
    throw Error(ErrorCode::StabilityError, "multi-server queue needs lambda < s * mu");

  // pi(0)^-1 = sum_{n<s} a^n/n! + a^s/s! * 1/(1-rho)
  T inv_pi0(0), term(1);
  for (long n = 0; n < servers; ++n) {
    inv_pi0 += term;
    term = term * offered / T(n + 1);
  }
  const T top = term;  // a^s / s!
  inv_pi0 += top / (T(1) - rho);
  const T pi0 = T(1) / inv_pi0;

  QueueMetrics<T> m;
  const long s = servers;
  const T a = offered;
  m.stationary = [pi0, a, s](long n) {
    if (n < 0) return T(0);
    T p = pi0;
    for (long i = 1; i <= n; ++i) p = p * a / T(std::min(i, s));
    return p;
  };
  m.wait_probability = top * pi0 / (T(1) - rho);  // all servers busy at arrival
  const T queue_length = m.wait_probability * rho / (T(1) - rho);
  m.mean_wait = queue_length / lambda;
  m.mean_sojourn = m.mean_wait + T(1) / mu;
  m.mean_in_system = queue_length + offered;
  m.utilization = rho;
  m.throughput = lambda;
  m.mean_busy_servers = offered;
  return m;
}

// Infinitely many servers: occupation is Poisson with mean lambda/mu and
// nobody ever waits.
inline QueueMetrics<double> mm_infinity(double lambda, double mu) {
  if (lambda <= 0 || mu <= 0)
    throw Error(ErrorCode::NonPositiveRate, "arrival and service rates must be positive");
  const double a = lambda / mu;
  QueueMetrics<double> m;
  m.stationary = [a](long n) { return n < 0 ? 0.0 : dist::pmf_poisson(a, n); };
  m.utilization = 0.0;
  m.mean_in_system = a;
  m.mean_wait = 0.0;
  m.mean_sojourn = 1.0 / mu;
  m.wait_probability = 0.0;
  m.throughput = lambda;
  m.mean_busy_servers = a;
  return m;
}

// Phase-count generator for a single server whose service needs `stages`
// exponential stages: one stage completes at rate mu, an arrival adds
// `stages` phases. The truncation must leave tail mass below 1e-12.
inline jump::Generator<double> mer1_generator(double lambda, double mu, long stages,
                                              long phase_cap) {
  if (lambda <= 0 || mu <= 0)
    throw Error(ErrorCode::NonPositiveRate, "arrival and service rates must be positive");
  if (stages < 1) throw Error(ErrorCode::BadInput, "stage count must be >= 1");
  if (phase_cap < 2 * stages) throw Error(ErrorCode::CapTooSmall, "cap below two customers");
  if (lambda * double(stages) >= mu)
    throw Error(ErrorCode::DivergentNormalizer,
                "phase drift nonnegative; no normalizable stationary law");

  const long n = phase_cap + 1;
  Matrix<double> rates(n, n, 0.0);
  for (long i = 0; i <= phase_cap; ++i) {
    double exit = 0.0;
    if (i >= 1) {
      rates(i, i - 1) = mu;
      exit += mu;
    }
    if (i + stages <= phase_cap) {
      rates(i, i + stages) = lambda;
      exit += lambda;
    }
    rates(i, i) = -exit;
  }
  jump::Generator<double> gen(std::move(rates));

  // verify the truncation is wide enough
  Distribution<double> pi = jump::stationary_jump(gen);
  double tail = 0.0;
  for (long i = phase_cap - stages + 1; i <= phase_cap; ++i) tail += pi[i];
  if (tail > 1e-12)
    throw Error(ErrorCode::CapTooSmall,
                "stationary mass near the truncation exceeds 1e-12; raise the cap");
  return gen;
}

// Sampler described by a law string: "exp:<rate>", "det:<value>", or
// "gamma:<rate>,<shape>".
struct LawSampler {
  std::string spec;
  double mean;
  std::function<double(RngStream&)> sample;
};

inline LawSampler make_sampler(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::BadLawSpec, "law '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  try {
    if (kind == "exp") {
      const double rate = std::stod(args);
      if (rate <= 0) throw Error(ErrorCode::BadLawSpec, "exponential rate must be positive");
      return {spec, 1.0 / rate,
              [rate](RngStream& rng) { return dist::sample_exponential(rate, rng); }};
    }
    if (kind == "det") {
      const double value = std::stod(args);
      if (value <= 0) throw Error(ErrorCode::BadLawSpec, "deterministic value must be positive");
      return {spec, value, [value](RngStream&) { return value; }};
    }
    if (kind == "gamma") {
      auto comma = args.find(',');
      if (comma == std::string::npos)
        throw Error(ErrorCode::BadLawSpec, "gamma needs rate and shape");
      const double rate = std::stod(args.substr(0, comma));
      const long shape = std::stol(args.substr(comma + 1));
      if (rate <= 0 || shape < 1) throw Error(ErrorCode::BadLawSpec, "gamma parameters");
      return {spec, double(shape) / rate,
              [rate, shape](RngStream& rng) { return dist::sample_gamma(rate, shape, rng); }};
    }
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::BadLawSpec, "cannot parse law '" + spec + "'");
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::BadLawSpec, "cannot parse law '" + spec + "'");
  }
  throw Error(ErrorCode::BadLawSpec, "unknown law kind '" + kind + "'");
}

// Empirical results of one single-server FIFO run. Steady-state figures skip
// the warm-up prefix of the horizon.
struct Gg1Result {
  double horizon;
  double warmup;
  double time_avg_queue_length;        // L, time average of number in system
  double mean_wait;                    // per customer, arrival to service start
  double mean_sojourn;                 // per customer, arrival to departure
  double busy_fraction;
  double arrival_rate;                 // measured, after warm-up
  long customers_served;
  std::vector<double> departures;      // departure times after warm-up
  std::vector<double> time_in_state;   // fraction of post-warm-up time with n in system
  std::vector<long> arrival_seen;      // histogram of queue length seen by arrivals
  double mean_busy_period;
  long busy_periods;
};

// Event-driven single-server FIFO queue from empty. Events are processed in
// (time, sequence) order so simultaneous events resolve deterministically.
template <typename ArrivalFn, typename ServiceFn>
Gg1Result simulate_gg1(ArrivalFn next_interarrival, ServiceFn next_service, double horizon,
                       RngStream& rng, double warmup_fraction = 0.1) {
  if (horizon <= 0) throw Error(ErrorCode::BadInput, "horizon must be positive");
  if (warmup_fraction < 0 || warmup_fraction >= 1)
    throw Error(ErrorCode::BadInput, "warm-up fraction outside [0,1)");
  const double warmup = horizon * warmup_fraction;

  struct Event {
    double time;
    long seq;
  };
  long seq_counter = 0;
  Event arrival{next_interarrival(rng), seq_counter++};
  Event departure{horizon + 1.0, -1};  // inactive

  std::deque<double> waiting;  // arrival times of queued customers
  double in_service_arrival = 0.0;
  bool busy = false;

  Gg1Result result{};
  result.horizon = horizon;
  result.warmup = warmup;
  result.time_in_state.assign(64, 0.0);
  result.arrival_seen.assign(64, 0);

  long n_in_system = 0;
  double clock = 0.0;
  double measured_time = 0.0;
  double busy_time = 0.0;
  double wait_sum = 0.0, sojourn_sum = 0.0;
  long wait_count = 0, sojourn_count = 0, arrivals_seen = 0;
  double busy_period_start = 0.0;
  double busy_period_sum = 0.0;
  long busy_period_count = 0;
  bool busy_period_valid = false;  // started after warm-up

  auto integrate_to = [&](double t) {
    const double lo = std::max(clock, warmup);
    const double hi = std::min(t, horizon);
    if (hi > lo) {
      const double span = hi - lo;
      measured_time += span;
      if (static_cast<std::size_t>(n_in_system) >= result.time_in_state.size())
        result.time_in_state.resize(n_in_system + 1, 0.0);
      result.time_in_state[n_in_system] += span;
      if (busy) busy_time += span;
    }
    clock = t;
  };

  auto start_service = [&](double now, double customer_arrival) {
    busy = true;
    in_service_arrival = customer_arrival;
    if (customer_arrival >= warmup) {
      wait_sum += now - customer_arrival;
      ++wait_count;
    }
    departure = {now + next_service(rng), seq_counter++};
  };

  while (true) {
    const bool arrival_next =
        arrival.time < departure.time ||
        (arrival.time == departure.time && arrival.seq < departure.seq);
    const Event event = arrival_next ? arrival : departure;
    if (event.time > horizon) break;
    integrate_to(event.time);

    if (arrival_next) {
      if (event.time >= warmup) {
        if (static_cast<std::size_t>(n_in_system) >= result.arrival_seen.size())
          result.arrival_seen.resize(n_in_system + 1, 0);
        ++result.arrival_seen[n_in_system];
        ++arrivals_seen;
      }
      if (n_in_system == 0) {
        busy_period_start = event.time;
        busy_period_valid = event.time >= warmup;
        start_service(event.time, event.time);
      } else {
        waiting.push_back(event.time);
      }
      ++n_in_system;
      arrival = {event.time + next_interarrival(rng), seq_counter++};
    } else {
      --n_in_system;
      if (in_service_arrival >= warmup) {
        sojourn_sum += event.time - in_service_arrival;
        ++sojourn_count;
        ++result.customers_served;
      }
      if (event.time >= warmup) result.departures.push_back(event.time);
      if (!waiting.empty()) {
        const double customer_arrival = waiting.front();
        waiting.pop_front();
        start_service(event.time, customer_arrival);
      } else {
        busy = false;
        departure = {horizon + 1.0, -1};
        if (busy_period_valid) {
          busy_period_sum += event.time - busy_period_start;
          ++busy_period_count;
        }
      }
    }
  }
  integrate_to(horizon);

  double weighted = 0.0;
  for (std::size_t n = 0; n < result.time_in_state.size(); ++n) {
    weighted += double(n) * result.time_in_state[n];
    result.time_in_state[n] /= measured_time;
  }
  result.time_avg_queue_length = weighted / measured_time;
  result.mean_wait = wait_count ? wait_sum / double(wait_count) : 0.0;
  result.mean_sojourn = sojourn_count ? sojourn_sum / double(sojourn_count) : 0.0;
  result.busy_fraction = busy_time / measured_time;
  result.arrival_rate = double(arrivals_seen) / measured_time;
  result.mean_busy_period = busy_period_count ? busy_period_sum / double(busy_period_count) : 0.0;
  result.busy_periods = busy_period_count;
  return result;
}

// Departure times of an s-server Markovian queue, after the warm-up prefix.
// Memorylessness lets both clocks be redrawn at every event, so the race
// between the next arrival and the next completion is exact.
inline std::vector<double> simulate_mms_departures(double lambda, double mu, long servers,
                                                   double horizon, RngStream& rng,
                                                   double warmup_fraction = 0.1) {
  if (lambda <= 0 || mu <= 0) throw Error(ErrorCode::NonPositiveRate, "rates must be positive");
  if (servers < 1) throw Error(ErrorCode::BadInput, "server count must be >= 1");
  if (lambda >= double(servers) * mu)
    throw Error(ErrorCode::StabilityError, "queue needs lambda < s * mu");
  const double warmup = horizon * warmup_fraction;
  std::vector<double> departures;
  double clock = 0.0;
  long in_system = 0;
  while (true) {
    const double busy = double(std::min(in_system, servers)) * mu;
    const double next_arrival = dist::sample_exponential(lambda, rng);
    const double next_departure =
        busy > 0 ? dist::sample_exponential(busy, rng) : horizon + 1.0;
    if (next_arrival < next_departure) {
      clock += next_arrival;
      if (clock > horizon) break;
      ++in_system;
    } else {
      clock += next_departure;
      if (clock > horizon) break;
      --in_system;
      if (clock >= warmup) departures.push_back(clock);
    }
  }
  return departures;
}

struct BurkeReport {
  std::size_t departures;
  double ks_statistic;
  double ks_p_value;
  bool ks_pass;
  double lag1;
  double lag1_bound;
  bool lag1_pass;
  bool pass;
};

// Departure-stream test: interarrivals of served customers against the
// exponential law of the arrival rate, plus a lag-1 correlation screen.
inline BurkeReport burke_departure_test(const std::vector<double>& departures, double lambda,
                                        double significance = 1e-3) {
  if (departures.size() < 10001)
    throw Error(ErrorCode::InsufficientData, "need more than 10^4 departures");
  std::vector<double> gaps(departures.size() - 1);
  for (std::size_t i = 1; i < departures.size(); ++i) gaps[i - 1] = departures[i] - departures[i - 1];

  KsReport ks = ks_test(gaps, [lambda](double x) { return 1.0 - std::exp(-lambda * x); });
  BurkeReport report{};
  report.departures = departures.size();
  report.ks_statistic = ks.statistic;
  report.ks_p_value = ks.p_value;
  report.ks_pass = ks.p_value >= significance;
  report.lag1 = lag1_autocorrelation(gaps);
  report.lag1_bound = 3.29 / std::sqrt(double(gaps.size()));  // two-sided normal at 1e-3
  report.lag1_pass = std::fabs(report.lag1) <= report.lag1_bound;
  report.pass = report.ks_pass && report.lag1_pass;
  return report;
}

}  // namespace queueing
}  // namespace stochastik
