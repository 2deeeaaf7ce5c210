#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace stochastik {

// Probability vector over a finite state set. Entries are nonnegative and sum
// to one (exactly for rationals, within 1e-12 for doubles).
template <typename T>
class Distribution {
 public:
  explicit Distribution(std::vector<T> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw Error(ErrorCode::DimensionMismatch, "empty distribution");
    T sum(0);
    for (const T& p : probs_) {
      if (p < T(0)) throw Error(ErrorCode::NegativeEntry, "negative probability");
      sum += p;
    }
    if (scalar_traits<T>::exact) {
      if (sum != T(1)) throw Error(ErrorCode::RowSumNotOne, "distribution does not sum to 1");
    } else if (scalar_traits<T>::abs(sum - T(1)) > scalar_traits<T>::tolerance()) {
      throw Error(ErrorCode::RowSumNotOne, "distribution does not sum to 1");
    }
  }

  static Distribution point_mass(std::size_t n, std::size_t i) {
    std::vector<T> p(n, T(0));
    p.at(i) = T(1);
    return Distribution(std::move(p));
  }

  std::size_t size() const { return probs_.size(); }
  const T& operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<T>& probs() const { return probs_; }

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<T> probs_;
};

// Square row-stochastic matrix. Construction validates; nothing is ever
// normalized silently.
template <typename T>
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Matrix<T> entries, std::vector<std::string> labels = {})
      : entries_(std::move(entries)), labels_(std::move(labels)) {
    const std::size_t n = entries_.rows();
    if (n == 0 || entries_.cols() != n)
      throw Error(ErrorCode::DimensionMismatch, "transition matrix must be square, n >= 1");
    if (!labels_.empty() && labels_.size() != n)
      throw Error(ErrorCode::DimensionMismatch, "label count mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      T sum(0);
      for (std::size_t j = 0; j < n; ++j) {
        const T& p = entries_(i, j);
        if (p < T(0) || p > T(1))
          throw Error(ErrorCode::NegativeEntry,
                      "entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside [0,1]");
        sum += p;
      }
      if (scalar_traits<T>::exact ? (sum != T(1))
                                  : (scalar_traits<T>::abs(sum - T(1)) >
                                     scalar_traits<T>::tolerance())) {
        throw Error(ErrorCode::RowSumNotOne,
                    "row " + std::to_string(i) + " deviates from 1 by " +
                        std::to_string(to_double(sum - T(1))));
      }
    }
  }

  std::size_t size() const { return entries_.rows(); }
  const T& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  const Matrix<T>& matrix() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }

  StochasticMatrix operator*(const StochasticMatrix& other) const {
    return StochasticMatrix(entries_ * other.entries_, labels_);
  }

  Matrix<T> power(unsigned long m) const { return matrix_power(entries_, m); }

 private:
  Matrix<T> entries_;
  std::vector<std::string> labels_;
};

template <typename T>
StochasticMatrix<T> validate_stochastic(Matrix<T> raw, std::vector<std::string> labels = {}) {
  return StochasticMatrix<T>(std::move(raw), std::move(labels));
}

// Distribution after m steps of the chain.
template <typename T>
Distribution<T> power_step(const Distribution<T>& initial, const StochasticMatrix<T>& p,
                           unsigned long m) {
  if (initial.size() != p.size())
    throw Error(ErrorCode::DimensionMismatch, "distribution/matrix size mismatch");
  std::vector<T> v = initial.probs();
  for (unsigned long step = 0; step < m; ++step) v = v * p.matrix();
  return Distribution<T>(std::move(v));
}

enum class ClassKind { RecurrentCandidate, TransientCandidate };

struct ChainClassification {
  std::vector<std::vector<int>> classes;   // communication classes, each sorted
  std::vector<ClassKind> class_kind;       // closed vs non-closed, finite-chain sense
  std::vector<int> class_of;               // state -> class index
  bool irreducible = false;
  bool absorbing_chain = false;
  std::vector<int> absorbing_states;
  bool regular = false;
  std::optional<long> regular_witness;     // smallest k with all entries of P^k positive
  std::vector<int> period;                 // 0 when the state lies on no cycle
};

namespace detail {

// Positive-entry adjacency packed into 64-bit row words.
struct BitMatrix {
  std::size_t n, words;
  std::vector<std::uint64_t> bits;

  explicit BitMatrix(std::size_t n_) : n(n_), words((n_ + 63) / 64), bits(n_ * words, 0) {}

  void set(std::size_t i, std::size_t j) { bits[i * words + j / 64] |= std::uint64_t(1) << (j % 64); }
  bool get(std::size_t i, std::size_t j) const {
    return (bits[i * words + j / 64] >> (j % 64)) & 1;
  }

  BitMatrix multiply(const BitMatrix& other) const {
    BitMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (get(i, j))
          for (std::size_t w = 0; w < words; ++w)
            out.bits[i * words + w] |= other.bits[j * words + w];
    return out;
  }

  bool all_set() const {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t expected = (w + 1 < words || n % 64 == 0)
                                     ? ~std::uint64_t(0)
                                     : ((std::uint64_t(1) << (n % 64)) - 1);
        if ((bits[i * words + w] & expected) != expected) return false;
      }
    }
    return true;
  }

  bool operator==(const BitMatrix& other) const { return bits == other.bits; }
};

template <typename T>
BitMatrix positive_adjacency(const StochasticMatrix<T>& p) {
  BitMatrix adj(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (p(i, j) > T(0)) adj.set(i, j);
  return adj;
}

// Kosaraju strongly connected components; classes come out in a stable order
// (by smallest contained state).
inline std::pair<std::vector<std::vector<int>>, std::vector<int>> strongly_connected_components(
    const BitMatrix& adj) {
  const int n = static_cast<int>(adj.n);
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    // iterative DFS, post-order
    std::vector<std::pair<int, int>> stack{{start, 0}};
    seen[start] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      bool advanced = false;
      for (int v = next; v < n; ++v) {
        if (adj.get(u, v) && !seen[v]) {
          next = v + 1;
          seen[v] = 1;
          stack.emplace_back(v, 0);
          advanced = true;
          break;
        }
        next = v + 1;
      }
      if (!advanced) {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> classes;
  for (int idx = n - 1; idx >= 0; --idx) {
    int root = order[idx];
    if (comp[root] != -1) continue;
    std::vector<int> members{root};
    comp[root] = 0;  // placeholder, fixed below
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v)
        if (adj.get(v, u) && comp[v] == -1) {
          comp[v] = 0;
          members.push_back(v);
          stack.push_back(v);
        }
    }
    std::sort(members.begin(), members.end());
    classes.push_back(std::move(members));
  }
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (int s : classes[c]) comp[s] = static_cast<int>(c);
  return {classes, comp};
}

// Period of each state: gcd of (level(u)+1-level(v)) over intra-class edges,
// constant on each class; 0 for states on no cycle.
inline std::vector<int> class_periods(const BitMatrix& adj,
                                      const std::vector<std::vector<int>>& classes,
                                      const std::vector<int>& comp) {
  const int n = static_cast<int>(adj.n);
  std::vector<int> period(n, 0);
  std::vector<long> level(n, -1);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto& members = classes[c];
    bool has_edge = false;
    for (int u : members) {
      for (int v : members)
        if (adj.get(u, v)) {
          has_edge = true;
          break;
        }
      if (has_edge) break;
    }
    if (!has_edge) continue;  // singleton without self-loop
    const int root = members.front();
    for (int u : members) level[u] = -1;
    level[root] = 0;
    std::vector<int> queue{root};
    std::size_t head = 0;
    long g = 0;
    while (head < queue.size()) {
      int u = queue[head++];
      for (int v : members) {
        if (!adj.get(u, v)) continue;
        if (level[v] == -1) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        } else {
          g = std::gcd(g, level[u] + 1 - level[v]);
        }
      }
    }
    for (int u : members) period[u] = static_cast<int>(std::abs(g));
  }
  return period;
}

}  // namespace detail

// Structural analysis of the positive-probability digraph: communication
// classes, absorbing reachability, regularity with witness exponent, periods.
// The witness search scans powers P^k for k <= witness_cap; the default cap is
// the primitivity bound (n-1)^2 + 1.
template <typename T>
ChainClassification classify(const StochasticMatrix<T>& p, long witness_cap = -1) {
  const std::size_t n = p.size();
  if (witness_cap < 0) witness_cap = static_cast<long>((n - 1) * (n - 1) + 1);
  if (witness_cap < 1) throw Error(ErrorCode::BadInput, "witness cap must be >= 1");

  ChainClassification result;
  detail::BitMatrix adj = detail::positive_adjacency(p);
  auto [classes, comp] = detail::strongly_connected_components(adj);
  result.classes = classes;
  result.class_of = comp;
  result.irreducible = classes.size() == 1;

  result.class_kind.assign(classes.size(), ClassKind::RecurrentCandidate);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (int u : classes[c])
      for (std::size_t v = 0; v < n; ++v)
        if (adj.get(u, v) && comp[v] != static_cast<int>(c)) {
          result.class_kind[c] = ClassKind::TransientCandidate;
        }
  }

  for (std::size_t i = 0; i < n; ++i) {
    bool absorbing = scalar_traits<T>::exact
                         ? (p(i, i) == T(1))
                         : (scalar_traits<T>::abs(p(i, i) - T(1)) <= scalar_traits<T>::tolerance());
    if (absorbing) result.absorbing_states.push_back(static_cast<int>(i));
  }

  // every state reaches some absorbing state <=> reverse reachability cover
  if (!result.absorbing_states.empty()) {
    std::vector<char> reaches(n, 0);
    std::vector<int> stack;
    for (int a : result.absorbing_states) {
      reaches[a] = 1;
      stack.push_back(a);
    }
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v)
        if (adj.get(v, u) && !reaches[v]) {
          reaches[v] = 1;
          stack.push_back(static_cast<int>(v));
        }
    }
    result.absorbing_chain =
        std::all_of(reaches.begin(), reaches.end(), [](char c) { return c != 0; });
  }

  result.period = detail::class_periods(adj, classes, comp);

  // regularity: some power of the matrix is entrywise positive, which holds
  // exactly for irreducible aperiodic chains. The witness scan only runs in
  // that case, where it terminates at the witness exponent; the cap bounds
  // the scan regardless.
  const bool primitive_candidate = result.irreducible && result.period[0] == 1;
  if (primitive_candidate) {
    detail::BitMatrix power = adj;
    for (long k = 1; k <= witness_cap; ++k) {
      if (power.all_set()) {
        result.regular = true;
        result.regular_witness = k;
        break;
      }
      if (k < witness_cap) power = power.multiply(adj);
    }
  }
  return result;
}

// Period of one state: gcd of return-cycle lengths through it.
template <typename T>
int period(const StochasticMatrix<T>& p, int state) {
  if (state < 0 || static_cast<std::size_t>(state) >= p.size())
    throw Error(ErrorCode::BadInput, "state index out of range");
  ChainClassification cls = classify(p, 1);
  int value = cls.period[state];
  if (value == 0)
    throw Error(ErrorCode::NoReturnPath, "state " + std::to_string(state) + " never returns");
  return value;
}

// Samples X_0..X_steps. Each transition inverts the cumulative row against one
// uniform draw; identical seeds replay identical paths.
template <typename T>
std::vector<int> simulate_trajectory(const StochasticMatrix<T>& p, const Distribution<T>& initial,
                                     long steps, RngStream& rng) {
  if (initial.size() != p.size())
    throw Error(ErrorCode::DimensionMismatch, "distribution/matrix size mismatch");
  if (steps < 0) throw Error(ErrorCode::BadInput, "steps must be >= 0");
  const std::size_t n = p.size();

  auto sample_index = [&](auto prob_at) {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      acc += to_double(prob_at(j));
      if (u < acc) return static_cast<int>(j);
    }
    return static_cast<int>(n - 1);
  };

  std::vector<int> path;
  path.reserve(steps + 1);
  int current = sample_index([&](std::size_t j) { return initial[j]; });
  path.push_back(current);
  for (long step = 0; step < steps; ++step) {
    current = sample_index([&](std::size_t j) { return p(current, j); });
    path.push_back(current);
  }
  return path;
}

}  // namespace stochastik
