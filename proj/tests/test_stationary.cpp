#include <catch2/catch_amalgamated.hpp>

#include <stochastik/stochastik.hpp>

#include "test_util.hpp"

using namespace stochastik;
using Catch::Approx;

namespace {

Rational rat(long a, long b = 1) { return Rational(a, b); }

StochasticMatrix<Rational> chain_of_four() {
  Matrix<Rational> m{{rat(0), rat(1), rat(0), rat(0)},
                     {rat(1, 4), rat(1, 2), rat(1, 4), rat(0)},
                     {rat(0), rat(1, 2), rat(0), rat(1, 2)},
                     {rat(0), rat(0), rat(1), rat(0)}};
  return StochasticMatrix<Rational>(std::move(m));
}

StochasticMatrix<Rational> two_state(const Rational& p, const Rational& q) {
  Matrix<Rational> m{{rat(1) - p, p}, {q, rat(1) - q}};
  return StochasticMatrix<Rational>(std::move(m));
}

}  // namespace

TEST_CASE("stationary distribution of the named exercises") {
  auto diamond = zoo::build("diamond");
  auto pi4 = stationary_distribution(*diamond.chain);
  REQUIRE(pi4.probs() ==
          std::vector<Rational>{rat(1, 33), rat(8, 33), rat(8, 33), rat(16, 33)});

  auto pi5 = stationary_distribution(chain_of_four());
  REQUIRE(pi5.probs() == std::vector<Rational>{rat(1, 8), rat(1, 2), rat(1, 4), rat(1, 8)});
}

TEST_CASE("stationary distribution of the urn chain is binomial") {
  for (long n : {2L, 3L, 5L, 8L}) {
    auto chain = zoo::detail::ehrenfest_chain(n);
    auto pi = stationary_distribution(chain);
    for (long i = 0; i <= n; ++i)
      REQUIRE(pi[i] == Rational(binomial_coefficient(n, i), integer_pow(2, n)));
  }
}

TEST_CASE("stationary distribution is an exact fixed point") {
  RngStream rng(3);
  int found = 0;
  for (int trial = 0; trial < 40 && found < 12; ++trial) {
    auto chain = testutil::random_rational_chain(rng, 4, 6, 0.35);
    if (!classify(chain).irreducible) continue;
    ++found;
    auto pi = stationary_distribution(chain);
    REQUIRE(pi.probs() * chain.matrix() == pi.probs());
  }
  REQUIRE(found == 12);
}

TEST_CASE("stationary distribution rejects reducible chains") {
  Matrix<Rational> m{{rat(1), rat(0)}, {rat(1, 2), rat(1, 2)}};
  try {
    stationary_distribution(StochasticMatrix<Rational>(std::move(m)));
    FAIL("expected NotIrreducible");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::NotIrreducible);
  }
}

TEST_CASE("limit matrix of a regular chain is the stationary projector") {
  auto diamond = zoo::build("diamond");
  auto result = stationary_analysis(*diamond.chain);
  REQUIRE(result.limit_matrix.has_value());
  const auto& proj = *result.limit_matrix;
  REQUIRE(proj * proj == proj);
  REQUIRE(proj * diamond.chain->matrix() == proj);
  REQUIRE(diamond.chain->matrix() * proj == proj);
}

TEST_CASE("mean recurrence times invert the stationary law") {
  auto weather = zoo::build("weather");
  auto pi = stationary_distribution(*weather.chain);
  auto times = mean_recurrence_times(pi);
  REQUIRE(times == std::vector<Rational>{rat(3), rat(2), rat(6)});

  Distribution<Rational> degenerate(std::vector<Rational>{rat(1), rat(0)});
  REQUIRE_THROWS_AS(mean_recurrence_times(degenerate), Error);
}

TEST_CASE("knight corner recurrence time is 168") {
  auto knight = zoo::build("knight");
  auto cert = reversible_vector(*knight.chain);
  REQUIRE(cert.reversible);
  REQUIRE(Rational(1) / cert.weights[0] == rat(168));
}

TEST_CASE("degree vector of a graph walk passes the balance check") {
  auto flea = zoo::build("flea");
  auto cert = reversible_vector(*flea.chain);
  REQUIRE(cert.reversible);
  // weights proportional to vertex degrees: corner degree 2, total 60
  REQUIRE(cert.weights[10] == rat(2, 60));
}

TEST_CASE("balance violation reports a witness pair") {
  auto square = zoo::build("asymmetric_square");
  auto cert = reversible_vector(*square.chain);
  REQUIRE_FALSE(cert.reversible);
  auto [i, j] = cert.violation;
  const auto& p = *square.chain;
  auto pi = stationary_distribution(p);
  REQUIRE(pi[i] * p(i, j) != pi[j] * p(j, i));
}

TEST_CASE("ring walk is reversible exactly at one half") {
  REQUIRE_FALSE(reversible_vector(zoo::detail::ring_chain(5, rat(2, 3))).reversible);
  REQUIRE(reversible_vector(zoo::detail::ring_chain(5, rat(1, 2))).reversible);
  REQUIRE_FALSE(reversible_vector(zoo::detail::ring_chain(6, rat(1, 3))).reversible);
  REQUIRE(reversible_vector(zoo::detail::ring_chain(6, rat(1, 2))).reversible);
}

TEST_CASE("accepted balance weights are stationary") {
  RngStream rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    // reversible rational chain from symmetric integer weights
    Matrix<Rational> weights(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = i; j < 5; ++j) {
        weights(i, j) = Rational(1 + static_cast<long>(rng.uniform_below(9)), 1);
        weights(j, i) = weights(i, j);
      }
    Matrix<Rational> p(5, 5);
    for (int i = 0; i < 5; ++i) {
      Rational degree(0);
      for (int j = 0; j < 5; ++j) degree += weights(i, j);
      for (int j = 0; j < 5; ++j) p(i, j) = weights(i, j) / degree;
    }
    StochasticMatrix<Rational> chain(std::move(p));
    auto cert = reversible_vector(chain);
    REQUIRE(cert.reversible);
    REQUIRE(cert.weights * chain.matrix() == cert.weights);
  }
}

TEST_CASE("time-reversal path law holds for reversible chains") {
  auto model = zoo::build("chain_of_four");
  const auto& p = *model.chain;
  auto pi = stationary_distribution(p);
  const int n = 4;
  // all paths of length <= 4: forward and reversed probabilities agree exactly
  for (int len = 1; len <= 4; ++len) {
    std::vector<int> path(len + 1, 0);
    std::function<void(int)> scan = [&](int pos) {
      if (pos > len) {
        Rational forward = pi[path[0]];
        for (int k = 0; k < len; ++k) forward *= p(path[k], path[k + 1]);
        Rational backward = pi[path[len]];
        for (int k = len; k > 0; --k) backward *= p(path[k], path[k - 1]);
        REQUIRE(forward == backward);
        return;
      }
      for (int s = 0; s < n; ++s) {
        path[pos] = s;
        scan(pos + 1);
      }
    };
    scan(1);
  }
}

TEST_CASE("ergodic average: constant reward is exact for every horizon") {
  auto chain = chain_of_four();
  Distribution<Rational> nu = Distribution<Rational>::point_mass(4, 2);
  std::vector<Rational> ones(4, rat(1));
  for (long n : {1L, 7L, 40L}) REQUIRE(ergodic_average(chain, nu, ones, n) == rat(1));
}

TEST_CASE("ergodic average: two-state flip from a point mass alternates to one half") {
  auto chain = two_state(rat(1), rat(1));
  Distribution<Rational> nu = Distribution<Rational>::point_mass(2, 0);
  std::vector<Rational> indicator{rat(1), rat(0)};
  REQUIRE(ergodic_average(chain, nu, indicator, 2) == rat(1, 2));
  REQUIRE(ergodic_average(chain, nu, indicator, 100) == rat(1, 2));
}

TEST_CASE("ergodic average converges to the stationary expectation") {
  auto chain = testutil::to_double_chain(zoo::detail::ehrenfest_chain(3));
  Distribution<double> nu = Distribution<double>::point_mass(4, 0);
  std::vector<double> indicator{1.0, 0.0, 0.0, 0.0};
  const double value = ergodic_average(chain, nu, indicator, 2000);
  REQUIRE(value == Approx(1.0 / 8.0).margin(1e-3));
}

TEST_CASE("spectral gap of a two-state chain is one minus |1 - p - q|") {
  for (auto [p, q] : std::vector<std::pair<double, double>>{{0.3, 0.5}, {0.9, 0.8}, {0.05, 0.6}}) {
    Matrix<double> m{{1 - p, p}, {q, 1 - q}};
    StochasticMatrix<double> chain(std::move(m));
    Distribution<double> pi(std::vector<double>{q / (p + q), p / (p + q)});
    auto result = spectral_gap(chain, pi);
    REQUIRE(result.subdominant_modulus == Approx(std::fabs(1 - p - q)).margin(1e-9));
  }
}

TEST_CASE("spectral gap handles the one-step-mixing lazy flip chain") {
  Matrix<double> m{{0.5, 0.5}, {0.5, 0.5}};
  StochasticMatrix<double> chain(std::move(m));
  Distribution<double> pi(std::vector<double>{0.5, 0.5});
  auto result = spectral_gap(chain, pi);
  REQUIRE(result.subdominant_modulus == Approx(0.0).margin(1e-12));
  REQUIRE(result.gap == Approx(1.0).margin(1e-12));
}

TEST_CASE("spectral gap matches a dense eigensolver on the two-ball urn chain") {
  auto chain = testutil::to_double_chain(zoo::detail::ehrenfest_chain(2));
  std::vector<double> pi{0.25, 0.5, 0.25};
  auto result = spectral_gap(chain, Distribution<double>(pi));
  const double oracle = testutil::subdominant_modulus_oracle(chain, pi);
  REQUIRE(result.subdominant_modulus == Approx(oracle).margin(1e-8));
}

TEST_CASE("spectral gap matches the dense oracle on random reversible chains") {
  RngStream rng(1234);
  for (int trial = 0; trial < 12; ++trial) {
    auto rev = testutil::random_reversible_chain(rng, 4 + static_cast<int>(rng.uniform_below(3)));
    auto result = spectral_gap(rev.chain, Distribution<double>(rev.pi));
    const double oracle = testutil::subdominant_modulus_oracle(rev.chain, rev.pi);
    REQUIRE(result.subdominant_modulus == Approx(oracle).margin(1e-7));
  }
}

TEST_CASE("spectral gap refuses non-reversible chains") {
  auto square = zoo::build("asymmetric_square");
  auto chain = testutil::to_double_chain(*square.chain);
  Distribution<double> pi(std::vector<double>(4, 0.25));
  try {
    spectral_gap(chain, pi);
    FAIL("expected NotReversible");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::NotReversible);
  }
}

TEST_CASE("distance to stationarity decays below 1e-8 within the gap horizon") {
  RngStream rng(88);
  for (int trial = 0; trial < 5; ++trial) {
    auto rev = testutil::random_reversible_chain(rng, 4);
    auto gap = spectral_gap(rev.chain, Distribution<double>(rev.pi));
    const long horizon = static_cast<long>(std::ceil(std::log(1e8) / gap.gap));

    std::vector<double> current{1.0, 0.0, 0.0, 0.0};
    double previous_distance = testutil::l1_distance(current, rev.pi);
    for (long step = 0; step < horizon; ++step) {
      current = current * rev.chain.matrix();
      const double distance = testutil::l1_distance(current, rev.pi);
      // monotone decay, up to rounding noise near machine precision
      REQUIRE(distance <= previous_distance * (1 + 1e-12) + 1e-15);
      previous_distance = distance;
    }
    REQUIRE(previous_distance < 1e-8);
  }
}
