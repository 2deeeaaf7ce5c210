#pragma once

#include <optional>
#include <vector>

#include "chain.hpp"
#include "linalg.hpp"

namespace stochastik {

// Canonical reordering of an absorbing chain: the q non-absorbing states first
// (original order kept), then the r absorbing ones. Fundamental and absorption
// matrices are filled on demand.
template <typename T>
struct AbsorbingDecomposition {
  std::vector<int> transient_states;  // original indices
  std::vector<int> absorbing_states;  // original indices
  Matrix<T> transient_block;          // q x q, transitions among transient states
  Matrix<T> absorbing_block;          // q x r, transitions into absorbing states
  std::optional<Matrix<T>> fundamental;
  std::optional<Matrix<T>> absorption;

  std::vector<int> ordering() const {
    std::vector<int> order = transient_states;
    order.insert(order.end(), absorbing_states.begin(), absorbing_states.end());
    return order;
  }
};

template <typename T>
AbsorbingDecomposition<T> canonical_form(const StochasticMatrix<T>& p) {
  ChainClassification cls = classify(p, 1);
  if (!cls.absorbing_chain)
    throw Error(ErrorCode::NotAbsorbing, "some state cannot reach an absorbing state");

  AbsorbingDecomposition<T> dec;
  std::vector<char> is_absorbing(p.size(), 0);
  for (int a : cls.absorbing_states) is_absorbing[a] = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    (is_absorbing[i] ? dec.absorbing_states : dec.transient_states).push_back(static_cast<int>(i));

  const std::size_t q = dec.transient_states.size();
  const std::size_t r = dec.absorbing_states.size();
  dec.transient_block = Matrix<T>(q, q);
  dec.absorbing_block = Matrix<T>(q, r);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j)
      dec.transient_block(i, j) = p(dec.transient_states[i], dec.transient_states[j]);
    for (std::size_t k = 0; k < r; ++k)
      dec.absorbing_block(i, k) = p(dec.transient_states[i], dec.absorbing_states[k]);
  }
  return dec;
}

// (I - Q)^-1; entry (i,j) is the expected number of visits to transient state
// j starting from transient state i.
template <typename T>
const Matrix<T>& fundamental_matrix(AbsorbingDecomposition<T>& dec) {
  if (!dec.fundamental) {
    const std::size_t q = dec.transient_states.size();
    Matrix<T> system = Matrix<T>::identity(q) - dec.transient_block;
    auto inv = invert_matrix(system);
    if (!inv)
      throw Error(ErrorCode::SingularMatrix, "I - Q not invertible; chain is not absorbing");
    dec.fundamental = std::move(*inv);
  }
  return *dec.fundamental;
}

// Row i, column k: probability of ending in absorbing state k from transient
// state i.
template <typename T>
const Matrix<T>& absorption_probabilities(AbsorbingDecomposition<T>& dec) {
  if (!dec.absorption) dec.absorption = fundamental_matrix(dec) * dec.absorbing_block;
  return *dec.absorption;
}

// Expected steps to absorption from each transient state (row sums of the
// fundamental matrix).
template <typename T>
std::vector<T> expected_absorption_times(AbsorbingDecomposition<T>& dec) {
  const Matrix<T>& f = fundamental_matrix(dec);
  std::vector<T> times(f.rows(), T(0));
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j) times[i] += f(i, j);
  return times;
}

// Absorption time averaged over an initial distribution on the full state
// space; mass already sitting on absorbing states contributes zero.
template <typename T>
T initial_averaged_absorption_time(AbsorbingDecomposition<T>& dec, const Distribution<T>& initial) {
  if (initial.size() != dec.transient_states.size() + dec.absorbing_states.size())
    throw Error(ErrorCode::DimensionMismatch, "initial distribution size");
  std::vector<T> times = expected_absorption_times(dec);
  T expected(0);
  for (std::size_t i = 0; i < dec.transient_states.size(); ++i)
    expected += initial[dec.transient_states[i]] * times[i];
  return expected;
}

}  // namespace stochastik
