#include <catch2/catch_amalgamated.hpp>

#include <stochastik/stochastik.hpp>

#include "test_util.hpp"

using namespace stochastik;
using Catch::Approx;

namespace {

Rational rat(long a, long b = 1) { return Rational(a, b); }

StochasticMatrix<Rational> coin_game() {
  Matrix<Rational> m{{rat(1, 2), rat(1, 2), rat(0), rat(0), rat(0), rat(0)},
                     {rat(0), rat(0), rat(0), rat(1, 2), rat(0), rat(1, 2)},
                     {rat(1, 2), rat(1, 2), rat(0), rat(0), rat(0), rat(0)},
                     {rat(0), rat(0), rat(1, 2), rat(0), rat(1, 2), rat(0)},
                     {rat(0), rat(0), rat(0), rat(0), rat(1), rat(0)},
                     {rat(0), rat(0), rat(0), rat(0), rat(0), rat(1)}};
  return StochasticMatrix<Rational>(std::move(m));
}

// random absorbing chain: a few transient states feeding two absorbing ones
StochasticMatrix<Rational> random_absorbing(RngStream& rng, int transient) {
  const int n = transient + 2;
  Matrix<Rational> m(n, n, rat(0));
  for (int i = 0; i < transient; ++i) {
    std::vector<long> w(n, 0);
    long total = 0;
    while (total == 0) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        w[j] = rng.uniform_below(5);
        total += w[j];
      }
      if (w[transient] + w[transient + 1] == 0) {
        w[transient] = 1;  // keep an exit open
        ++total;
      }
    }
    for (int j = 0; j < n; ++j)
      if (w[j]) m(i, j) = Rational(w[j], total);
  }
  m(transient, transient) = rat(1);
  m(transient + 1, transient + 1) = rat(1);
  return StochasticMatrix<Rational>(std::move(m));
}

}  // namespace

TEST_CASE("canonical_form extracts the coin-game blocks") {
  auto dec = canonical_form(coin_game());
  REQUIRE(dec.transient_states == std::vector<int>{0, 1, 2, 3});
  REQUIRE(dec.absorbing_states == std::vector<int>{4, 5});
  Matrix<Rational> q{{rat(1, 2), rat(1, 2), rat(0), rat(0)},
                     {rat(0), rat(0), rat(0), rat(1, 2)},
                     {rat(1, 2), rat(1, 2), rat(0), rat(0)},
                     {rat(0), rat(0), rat(1, 2), rat(0)}};
  Matrix<Rational> r{{rat(0), rat(0)}, {rat(0), rat(1, 2)}, {rat(0), rat(0)}, {rat(1, 2), rat(0)}};
  REQUIRE(dec.transient_block == q);
  REQUIRE(dec.absorbing_block == r);
}

TEST_CASE("canonical_form keeps an already-canonical ordering") {
  auto dec = canonical_form(coin_game());
  REQUIRE(dec.ordering() == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("canonical_form rejects an irreducible cycle") {
  Matrix<Rational> m{{rat(0), rat(1), rat(0)}, {rat(0), rat(0), rat(1)}, {rat(1), rat(0), rat(0)}};
  try {
    canonical_form(StochasticMatrix<Rational>(std::move(m)));
    FAIL("expected NotAbsorbing");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::NotAbsorbing);
  }
}

TEST_CASE("fundamental matrix of the coin game") {
  auto dec = canonical_form(coin_game());
  const auto& f = fundamental_matrix(dec);
  Matrix<Rational> expected{{rat(7, 3), rat(4, 3), rat(1, 3), rat(2, 3)},
                            {rat(1, 3), rat(4, 3), rat(1, 3), rat(2, 3)},
                            {rat(4, 3), rat(4, 3), rat(4, 3), rat(2, 3)},
                            {rat(2, 3), rat(2, 3), rat(2, 3), rat(4, 3)}};
  REQUIRE(f == expected);
  REQUIRE(f(0, 0) == rat(7, 3));
  REQUIRE(f(0, 1) == rat(4, 3));
}

TEST_CASE("fundamental matrix satisfies F (I - Q) = I exactly") {
  RngStream rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto chain = random_absorbing(rng, 2 + static_cast<int>(rng.uniform_below(3)));
    auto dec = canonical_form(chain);
    const auto& f = fundamental_matrix(dec);
    auto identity = f * (Matrix<Rational>::identity(f.rows()) - dec.transient_block);
    REQUIRE(identity == Matrix<Rational>::identity(f.rows()));
    for (std::size_t i = 0; i < f.rows(); ++i)
      for (std::size_t j = 0; j < f.cols(); ++j) REQUIRE(f(i, j) >= rat(0));
  }
}

TEST_CASE("absorption probabilities of the coin game and averaged win chance") {
  auto dec = canonical_form(coin_game());
  const auto& b = absorption_probabilities(dec);
  Matrix<Rational> expected{{rat(1, 3), rat(2, 3)},
                            {rat(1, 3), rat(2, 3)},
                            {rat(1, 3), rat(2, 3)},
                            {rat(2, 3), rat(1, 3)}};
  REQUIRE(b == expected);
  Rational a_wins(0);
  for (int i = 0; i < 4; ++i) a_wins += rat(1, 4) * b(i, 0);
  REQUIRE(a_wins == rat(5, 12));
}

TEST_CASE("absorption rows sum to one exactly") {
  RngStream rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    auto chain = random_absorbing(rng, 2 + static_cast<int>(rng.uniform_below(3)));
    auto dec = canonical_form(chain);
    const auto& b = absorption_probabilities(dec);
    for (std::size_t i = 0; i < b.rows(); ++i) {
      Rational sum(0);
      for (std::size_t k = 0; k < b.cols(); ++k) sum += b(i, k);
      REQUIRE(sum == rat(1));
    }
  }
}

TEST_CASE("single transient state feeding one absorbing state") {
  Matrix<Rational> m{{rat(0), rat(1)}, {rat(0), rat(1)}};
  auto dec = canonical_form(StochasticMatrix<Rational>(std::move(m)));
  const auto& b = absorption_probabilities(dec);
  REQUIRE(b.rows() == 1);
  REQUIRE(b(0, 0) == rat(1));
}

TEST_CASE("expected absorption times for the coin game") {
  auto dec = canonical_form(coin_game());
  auto times = expected_absorption_times(dec);
  REQUIRE(times[0] == rat(14, 3));
  Distribution<Rational> uniform_start(
      std::vector<Rational>{rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4), rat(0), rat(0)});
  REQUIRE(initial_averaged_absorption_time(dec, uniform_start) == rat(23, 6));
  REQUIRE(rat(2) + rat(23, 6) == rat(35, 6));  // two setup flips plus the averaged tail
}

TEST_CASE("truncated power series approximates the fundamental matrix") {
  RngStream rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    auto chain = random_absorbing(rng, 3);
    auto dec = canonical_form(chain);
    const auto& f = fundamental_matrix(dec);

    const std::size_t q = dec.transient_states.size();
    Matrix<double> qf(q, q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) qf(i, j) = to_double(dec.transient_block(i, j));
    Matrix<double> series = Matrix<double>::identity(q);
    Matrix<double> power = Matrix<double>::identity(q);
    for (int k = 1; k <= 500; ++k) {
      power = power * qf;
      series = series + power;
    }
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j)
        REQUIRE(series(i, j) == Approx(to_double(f(i, j))).margin(1e-9));
  }
}

TEST_CASE("monte carlo absorption frequencies match the absorption matrix") {
  auto chain = coin_game();
  auto dec = canonical_form(chain);
  const auto& b = absorption_probabilities(dec);
  auto chain_f = testutil::to_double_chain(chain);

  RngStream master(512);
  const int runs = 100000;
  int first_outcome = 0;
  for (int r = 0; r < runs; ++r) {
    RngStream rng = master.substream(r);
    auto path = simulate_trajectory(chain_f, Distribution<double>::point_mass(6, 0), 120, rng);
    REQUIRE(path.back() >= 4);
    if (path.back() == 4) ++first_outcome;
  }
  const double expected = to_double(b(0, 0));
  const double se = std::sqrt(expected * (1 - expected) / runs);
  REQUIRE(std::fabs(first_outcome / double(runs) - expected) < 3 * se);
}
