#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace stochastik {
namespace mcmc {

enum class AcceptanceRule { Threshold, HeatBath };

// Probability of accepting a proposed move with the given energy change.
// Threshold: always downhill, e^(-beta dH) uphill. Heat bath: 1/(1+e^(beta dH)).
inline double acceptance_probability(double delta_energy, double beta, AcceptanceRule rule) {
  if (beta < 0) throw Error(ErrorCode::BadInput, "inverse temperature must be >= 0");
  switch (rule) {
    case AcceptanceRule::Threshold:
      return delta_energy <= 0 ? 1.0 : std::exp(-beta * delta_energy);
    case AcceptanceRule::HeatBath:
      return 1.0 / (1.0 + std::exp(beta * delta_energy));
  }
  return 0.0;
}

// One update of a generic energy model. The model supplies a symmetric,
// uniformly weighted proposal set:
//   proposal_count(state), delta_energy(state, k), apply(state&, k).
// Returns true when the proposal was accepted.
template <typename Model, typename State>
bool metropolis_step(State& state, const Model& model, double beta, AcceptanceRule rule,
                     RngStream& rng) {
  const std::uint64_t count = model.proposal_count(state);
  if (count == 0) throw Error(ErrorCode::EmptyProposalSet, "no proposals from current state");
  const std::uint64_t k = rng.uniform_below(count);
  const double delta = model.delta_energy(state, k);
  const double accept = acceptance_probability(delta, beta, rule);
  if (accept >= 1.0 || rng.uniform01() < accept) {
    model.apply(state, k);
    return true;
  }
  return false;
}

// Planner bound: samples needed for precision delta at confidence 1-epsilon,
// given the chain's subdominant eigenvalue modulus. Valid when the chain
// starts in its stationary law.
inline double sample_size_bound(double observable_variance, double delta, double epsilon,
                                double subdominant_modulus) {
  if (delta <= 0 || epsilon <= 0 || epsilon >= 1)
    throw Error(ErrorCode::BadInput, "precision and confidence must be positive");
  if (subdominant_modulus < 0 || subdominant_modulus >= 1)
    throw Error(ErrorCode::BadInput, "eigenvalue modulus must lie in [0,1)");
  return observable_variance / (delta * delta * epsilon) *
         ((1.0 + subdominant_modulus) / (1.0 - subdominant_modulus));
}

struct EstimatorResult {
  double estimate;                        // (1/n) sum of the observable along the chain
  std::optional<double> recommended_samples;
  bool bound_assumes_stationary_start = true;
};

template <typename State, typename StepFn, typename ObsFn>
EstimatorResult mcmc_mean_estimator(State state, StepFn step, ObsFn observable, long n,
                                    long burn_in, RngStream& rng,
                                    std::optional<double> observable_variance = std::nullopt,
                                    double delta = 0.0, double epsilon = 0.0,
                                    std::optional<double> subdominant_modulus = std::nullopt) {
  if (n < 1) throw Error(ErrorCode::BadInput, "sample count must be >= 1");
  for (long m = 0; m < burn_in; ++m) step(state, rng);
  double total = 0.0;
  for (long m = 0; m < n; ++m) {
    total += observable(state);
    if (m + 1 < n) step(state, rng);
  }
  EstimatorResult result{total / double(n), std::nullopt, true};
  if (observable_variance && subdominant_modulus)
    result.recommended_samples =
        sample_size_bound(*observable_variance, delta, epsilon, *subdominant_modulus);
  return result;
}

// ---------------------------------------------------------------------------
// Ising model on a finite box with free boundary.

struct IsingConfig {
  std::vector<long> extents;       // side lengths, one per dimension
  std::vector<std::int8_t> spins;  // +1 / -1 per site, row-major
  double field = 0.0;
  double beta = 0.0;
  long spin_sum = 0;               // running sum of spins, kept exact

  long sites() const { return static_cast<long>(spins.size()); }
  double magnetization() const { return double(spin_sum) / double(sites()); }

  long recompute_spin_sum() const {
    long s = 0;
    for (auto v : spins) s += v;
    return s;
  }
};

inline IsingConfig make_ising(std::vector<long> extents, int fill_spin, double field, double beta) {
  if (extents.empty()) throw Error(ErrorCode::BadInput, "lattice needs at least one dimension");
  long total = 1;
  for (long e : extents) {
    if (e < 1) throw Error(ErrorCode::BadInput, "lattice extents must be >= 1");
    total *= e;
  }
  if (fill_spin != 1 && fill_spin != -1) throw Error(ErrorCode::BadInput, "spins are +1 or -1");
  IsingConfig cfg;
  cfg.extents = std::move(extents);
  cfg.spins.assign(total, static_cast<std::int8_t>(fill_spin));
  cfg.field = field;
  cfg.beta = beta;
  cfg.spin_sum = total * fill_spin;
  return cfg;
}

namespace detail {

// Row-major nearest neighbors inside the box; the last axis is contiguous.
template <typename Visit>
void visit_neighbors(const IsingConfig& cfg, long site, Visit visit) {
  long stride = 1;
  for (long a = static_cast<long>(cfg.extents.size()) - 1; a >= 0; --a) {
    const long extent = cfg.extents[a];
    const long coord = (site / stride) % extent;
    if (coord > 0) visit(site - stride);
    if (coord + 1 < extent) visit(site + stride);
    stride *= extent;
  }
}

}  // namespace detail

// Energy change from flipping one spin: 2 s_k (sum of neighbor spins + field);
// missing neighbors outside the box contribute nothing.
inline double ising_delta_h(const IsingConfig& cfg, long site) {
  if (site < 0 || site >= cfg.sites()) throw Error(ErrorCode::BadSite, "site outside lattice");
  long neighbor_sum = 0;
  detail::visit_neighbors(cfg, site, [&](long j) { neighbor_sum += cfg.spins[j]; });
  return 2.0 * double(cfg.spins[site]) * (double(neighbor_sum) + cfg.field);
}

// Full energy, recomputed from scratch: -sum_<ij> s_i s_j - h sum_i s_i.
inline double ising_energy(const IsingConfig& cfg) {
  double pair_sum = 0.0;
  for (long site = 0; site < cfg.sites(); ++site)
    detail::visit_neighbors(cfg, site, [&](long j) {
      if (j > site) pair_sum += double(cfg.spins[site]) * double(cfg.spins[j]);
    });
  return -pair_sum - cfg.field * double(cfg.spin_sum);
}

struct MagnetizationSeries {
  std::vector<double> values;  // running magnetization, sampled every record_every steps
  long record_every = 1;
  double final_magnetization = 0.0;
  long accepted = 0;
  long steps = 0;
};

// Single-spin-flip dynamics: uniform site choice, threshold acceptance, and
// an incrementally updated magnetization.
inline MagnetizationSeries glauber_chain(IsingConfig& cfg, long steps, RngStream& rng,
                                         long record_every = 1) {
  if (steps < 0) throw Error(ErrorCode::BadInput, "steps must be >= 0");
  if (record_every < 1) record_every = 1;
  MagnetizationSeries series;
  series.record_every = record_every;
  series.steps = steps;
  series.values.reserve(steps / record_every + 1);
  const long n = cfg.sites();
  for (long step = 0; step < steps; ++step) {
    const long site = static_cast<long>(rng.uniform_below(n));
    const double delta = ising_delta_h(cfg, site);
    const double accept = acceptance_probability(delta, cfg.beta, AcceptanceRule::Threshold);
    if (accept >= 1.0 || rng.uniform01() < accept) {
      cfg.spin_sum -= 2 * cfg.spins[site];
      cfg.spins[site] = -cfg.spins[site];
      ++series.accepted;
    }
    if ((step + 1) % record_every == 0) series.values.push_back(cfg.magnetization());
  }
  series.final_magnetization = cfg.magnetization();
  return series;
}

// Spin-exchange dynamics: swap one +1 site with one -1 site, accepted with the
// threshold rule. Total spin is conserved exactly.
inline bool kawasaki_step(IsingConfig& cfg, RngStream& rng) {
  std::vector<long> plus, minus;
  for (long i = 0; i < cfg.sites(); ++i)
    (cfg.spins[i] > 0 ? plus : minus).push_back(i);
  if (plus.empty() || minus.empty())
    throw Error(ErrorCode::UniformConfig, "spin exchange needs both spin values present");
  const long i = plus[rng.uniform_below(plus.size())];
  const long j = minus[rng.uniform_below(minus.size())];

  double delta = ising_delta_h(cfg, i);
  cfg.spins[i] = -cfg.spins[i];
  delta += ising_delta_h(cfg, j);
  cfg.spins[i] = -cfg.spins[i];  // restore; spin_sum untouched

  const double accept = acceptance_probability(delta, cfg.beta, AcceptanceRule::Threshold);
  if (accept >= 1.0 || rng.uniform01() < accept) {
    std::swap(cfg.spins[i], cfg.spins[j]);
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Simulated annealing for closed tours.

struct AnnealSchedule {
  double beta0;
  double growth;  // > 1
  long steps;

  AnnealSchedule(double beta0_, double growth_, long steps_)
      : beta0(beta0_), growth(growth_), steps(steps_) {
    if (beta0 <= 0) throw Error(ErrorCode::BadInput, "initial inverse temperature must be > 0");
    if (growth <= 1) throw Error(ErrorCode::BadInput, "growth factor must be > 1");
    if (steps < 0) throw Error(ErrorCode::BadInput, "steps must be >= 0");
  }

  double beta(long n) const { return beta0 * std::pow(growth, double(n)); }
};

enum class TourMove { Transposition, TwoOpt };

struct TourResult {
  std::vector<int> tour;  // permutation of cities, tour[0] == 0
  double length;
};

inline double tour_length(const Matrix<double>& distances, const std::vector<int>& tour) {
  double total = 0.0;
  for (std::size_t i = 0; i < tour.size(); ++i)
    total += distances(tour[i], tour[(i + 1) % tour.size()]);
  return total;
}

inline void validate_distances(const Matrix<double>& d) {
  const std::size_t n = d.rows();
  if (d.cols() != n || n < 3)
    throw Error(ErrorCode::BadDistanceMatrix, "need a square matrix over >= 3 cities");
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw Error(ErrorCode::BadDistanceMatrix, "diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (d(i, j) < 0) throw Error(ErrorCode::BadDistanceMatrix, "negative distance");
      if (d(i, j) != d(j, i)) throw Error(ErrorCode::BadDistanceMatrix, "matrix must be symmetric");
    }
  }
}

namespace detail {

inline double edges_at(const Matrix<double>& d, const std::vector<int>& tour,
                       const std::vector<long>& positions) {
  const long n = static_cast<long>(tour.size());
  double sum = 0.0;
  for (long p : positions) sum += d(tour[p], tour[(p + 1) % n]);
  return sum;
}

}  // namespace detail

// Annealed search for a short closed tour. City 0 stays fixed; moves swap two
// cities or reverse a segment; the best tour ever visited is returned.
inline TourResult simulated_annealing_tsp(const Matrix<double>& distances,
                                          const AnnealSchedule& schedule,
                                          TourMove move, RngStream& rng) {
  validate_distances(distances);
  const long n = static_cast<long>(distances.rows());

  std::vector<int> tour(n);
  for (long i = 0; i < n; ++i) tour[i] = static_cast<int>(i);
  double length = tour_length(distances, tour);
  TourResult best{tour, length};

  if (n == 3) return best;  // a single closed tour up to direction

  for (long step = 0; step < schedule.steps; ++step) {
    // two distinct positions in 1..n-1, ordered
    long a = 1 + static_cast<long>(rng.uniform_below(n - 1));
    long b = 1 + static_cast<long>(rng.uniform_below(n - 2));
    if (b >= a) ++b;
    if (a > b) std::swap(a, b);

    double delta = 0.0;
    if (move == TourMove::Transposition) {
      std::vector<long> affected{a - 1, a, b - 1, b};
      std::sort(affected.begin(), affected.end());
      affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
      const double before = detail::edges_at(distances, tour, affected);
      std::swap(tour[a], tour[b]);
      const double after = detail::edges_at(distances, tour, affected);
      std::swap(tour[a], tour[b]);
      delta = after - before;
    } else {
      // reverse tour[a..b]: edges (a-1,a) and (b,b+1) are replaced
      delta = distances(tour[a - 1], tour[b]) + distances(tour[a], tour[(b + 1) % n]) -
              distances(tour[a - 1], tour[a]) - distances(tour[b], tour[(b + 1) % n]);
    }

    const double accept = acceptance_probability(delta, schedule.beta(step),
                                                 AcceptanceRule::Threshold);
    if (accept >= 1.0 || rng.uniform01() < accept) {
      if (move == TourMove::Transposition)
        std::swap(tour[a], tour[b]);
      else
        std::reverse(tour.begin() + a, tour.begin() + b + 1);
      length += delta;
      if (length < best.length) {
        best.tour = tour;
        best.length = length;
      }
    }
  }
  best.length = tour_length(distances, best.tour);  // re-sum to shed drift
  return best;
}

}  // namespace mcmc
}  // namespace stochastik
