#include <catch2/catch_amalgamated.hpp>

#include <stochastik/stochastik.hpp>

#include "test_util.hpp"

using namespace stochastik;
using namespace stochastik::queueing;
using Catch::Approx;

namespace {
Rational rat(long a, long b = 1) { return Rational(a, b); }
}

TEST_CASE("single-server formulas at 20 arrivals and 30 services per hour") {
  auto m = mm1<Rational>(rat(20), rat(30));
  for (long n = 0; n <= 5; ++n) {
    Rational expected = rat(1, 3);
    for (long i = 0; i < n; ++i) expected *= rat(2, 3);
    REQUIRE(m.stationary(n) == expected);
  }
  REQUIRE(m.utilization == rat(2, 3));
  REQUIRE(m.mean_wait == rat(1, 15));      // 4 minutes
  REQUIRE(m.mean_sojourn == rat(1, 10));   // 6 minutes
  REQUIRE(m.wait_probability == rat(2, 3));
  REQUIRE(*m.conditional_wait_rate == rat(10));
  // Little: mean in system = throughput * sojourn
  REQUIRE(m.mean_in_system == m.throughput * m.mean_sojourn);
}

TEST_CASE("single-server wait at 4 arrivals and 6 services per hour is 20 minutes") {
  auto m = mm1<Rational>(rat(4), rat(6));
  REQUIRE(m.mean_wait == rat(1, 3));
}

TEST_CASE("single-server queue empties as arrivals vanish") {
  auto m = mm1<double>(1e-9, 1.0);
  REQUIRE(m.mean_in_system == Approx(0.0).margin(1e-8));
  REQUIRE(m.mean_wait == Approx(0.0).margin(1e-8));
}

TEST_CASE("instability and domain errors") {
  try {
    mm1<Rational>(rat(3), rat(2));
    FAIL("expected StabilityError");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::StabilityError);
  }
  REQUIRE_THROWS_AS(mm1<double>(0.0, 1.0), Error);
  REQUIRE_THROWS_AS(mms<double>(5.0, 1.0, 4), Error);
}

TEST_CASE("finite buffer: cap 2 with the same rates") {
  auto m = mm1n<Rational>(rat(20), rat(30), 2);
  REQUIRE(m.stationary(0) == rat(9, 19));
  REQUIRE(m.stationary(1) == rat(6, 19));
  REQUIRE(m.stationary(2) == rat(4, 19));
  REQUIRE(m.stationary(3) == rat(0));
  REQUIRE(*m.loss_probability == rat(4, 19));
  REQUIRE(m.throughput == rat(300, 19));
  REQUIRE(m.mean_in_system == m.throughput * m.mean_sojourn);  // Little, accepted rate
}

TEST_CASE("finite buffer at equal rates is uniform") {
  auto m = mm1n<Rational>(rat(7), rat(7), 2);
  for (long n = 0; n <= 2; ++n) REQUIRE(m.stationary(n) == rat(1, 3));
}

TEST_CASE("finite buffer converges to the unbounded queue as the cap grows") {
  auto bounded = mm1n<double>(2.0, 3.0, 200);
  auto unbounded = mm1<double>(2.0, 3.0);
  double tv_distance = 0.0;
  for (long n = 0; n <= 200; ++n)
    tv_distance += std::fabs(bounded.stationary(n) - unbounded.stationary(n));
  REQUIRE(tv_distance < 1e-12);

  // total-variation distance shrinks monotonically in the cap
  double previous = 1.0;
  for (long cap : {5L, 10L, 20L, 40L}) {
    auto capped = mm1n<double>(2.0, 3.0, cap);
    double tv = 0.0, unbounded_head = 0.0;
    for (long n = 0; n <= cap; ++n) {
      tv += std::fabs(capped.stationary(n) - unbounded.stationary(n));
      unbounded_head += unbounded.stationary(n);
    }
    tv += 1.0 - unbounded_head;  // unbounded mass beyond the cap
    REQUIRE(tv < previous);
    previous = tv;
  }
}

TEST_CASE("multi-server: three operators at offered load two") {
  auto m = mms<Rational>(rat(40), rat(20), 3);
  REQUIRE(*m.mean_busy_servers == rat(2));  // lambda / mu exactly
  REQUIRE(m.wait_probability == rat(4, 9));
  REQUIRE(m.utilization == rat(2, 3));
  REQUIRE(m.mean_in_system == m.throughput * m.mean_sojourn);
  // stationary head: pi(0) = 1/9, then a^n/n! scaling
  REQUIRE(m.stationary(0) == rat(1, 9));
  REQUIRE(m.stationary(1) == rat(2, 9));
  REQUIRE(m.stationary(2) == rat(2, 9));
  REQUIRE(m.stationary(3) == rat(4, 27));
  REQUIRE(m.stationary(4) == rat(8, 81));
}

TEST_CASE("one server through the multi-server formula reduces to the plain queue") {
  auto direct = mm1<Rational>(rat(2), rat(5));
  auto via_s = mms<Rational>(rat(2), rat(5), 1);
  for (long n = 0; n <= 6; ++n) REQUIRE(direct.stationary(n) == via_s.stationary(n));
  REQUIRE(direct.mean_wait == via_s.mean_wait);
  REQUIRE(direct.mean_in_system == via_s.mean_in_system);
  REQUIRE(direct.wait_probability == via_s.wait_probability);
}

TEST_CASE("one fast server keeps arrivals waiting more than two slow ones") {
  // same total capacity: P(wait) = a/2 for the single fast server versus
  // a^2/(2+a) for the pair; the single server is larger, exactly twice at a = 2/3
  for (Rational a : {rat(2, 3), rat(1), rat(3, 2)}) {
    auto fast = mm1<Rational>(a, rat(2));
    auto pair = mms<Rational>(a, rat(1), 2);
    REQUIRE(fast.wait_probability > pair.wait_probability);
  }
  auto fast = mm1<Rational>(rat(2, 3), rat(2));
  auto pair = mms<Rational>(rat(2, 3), rat(1), 2);
  REQUIRE(fast.wait_probability == rat(2) * pair.wait_probability);
}

TEST_CASE("infinite servers: Poisson occupation, no waiting") {
  auto m = mm_infinity(3.0, 3.0);
  REQUIRE(m.stationary(0) == Approx(std::exp(-1.0)));
  REQUIRE(m.mean_in_system == Approx(1.0));
  REQUIRE(m.mean_wait == 0.0);
  REQUIRE(m.wait_probability == 0.0);

  auto loaded = mm_infinity(10.0, 1.0);
  REQUIRE(loaded.mean_in_system == Approx(10.0));
  double mass = 0.0;
  for (long n = 0; n <= 60; ++n) mass += loaded.stationary(n);
  REQUIRE(mass > 1.0 - 1e-15);
}

TEST_CASE("stationary laws have unit mass up to truncation") {
  auto check_mass = [](const QueueMetrics<double>& m) {
    double mass = 0.0;
    for (long n = 0; n <= 400; ++n) mass += m.stationary(n);
    REQUIRE(mass >= 1.0 - 1e-12);
    REQUIRE(mass <= 1.0 + 1e-12);
  };
  check_mass(mm1<double>(1.0, 2.0));
  check_mass(mm1n<double>(2.0, 3.0, 10));
  check_mass(mms<double>(3.0, 1.0, 4));
  check_mass(mm_infinity(4.0, 2.0));
}

TEST_CASE("phase generator: stationary solve and stage-one reduction") {
  auto gen = mer1_generator(1.0, 3.0, 2, 120);
  auto pi = jump::stationary_jump(gen);
  double mass = 0.0, mean = 0.0;
  for (std::size_t n = 0; n < pi.size(); ++n) {
    mass += pi[n];
    mean += double(n) * pi[n];
  }
  REQUIRE(mass == Approx(1.0).margin(1e-12));
  REQUIRE(mean < 10.0);  // finite mean phase count

  // cap sensitivity below 1e-9
  auto wider = jump::stationary_jump(mer1_generator(1.0, 3.0, 2, 160));
  for (std::size_t n = 0; n < 100; ++n) REQUIRE(pi[n] == Approx(wider[n]).margin(1e-9));

  // single stage: the phase process is the plain single-server queue
  auto single = jump::stationary_jump(mer1_generator(1.0, 3.0, 1, 80));
  auto direct = mm1<double>(1.0, 3.0);
  for (long n = 0; n < 40; ++n) REQUIRE(single[n] == Approx(direct.stationary(n)).margin(1e-12));

  try {
    mer1_generator(3.0, 3.0, 2, 100);
    FAIL("expected DivergentNormalizer");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::DivergentNormalizer);
  }
  try {
    mer1_generator(1.0, 2.1, 2, 100);
    FAIL("expected CapTooSmall");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::CapTooSmall);
  }
}

TEST_CASE("law samplers parse and reject specs") {
  RngStream rng(1);
  auto exponential = make_sampler("exp:2");
  REQUIRE(exponential.mean == Approx(0.5));
  auto deterministic = make_sampler("det:1.5");
  REQUIRE(deterministic.sample(rng) == 1.5);
  auto gamma = make_sampler("gamma:4,2");
  REQUIRE(gamma.mean == Approx(0.5));
  REQUIRE_THROWS_AS(make_sampler("weibull:1"), Error);
  REQUIRE_THROWS_AS(make_sampler("exp"), Error);
  REQUIRE_THROWS_AS(make_sampler("gamma:1"), Error);
}

TEST_CASE("deterministic alternating schedule: no waits, half busy") {
  RngStream rng(2);
  auto result = simulate_gg1([](RngStream&) { return 2.0; }, [](RngStream&) { return 1.0; },
                             20000.0, rng);
  REQUIRE(result.mean_wait == 0.0);
  REQUIRE(result.busy_fraction == Approx(0.5).margin(1e-6));
  REQUIRE(result.mean_sojourn == Approx(1.0).margin(1e-9));
}

TEST_CASE("markovian single-server run matches the closed forms at modest horizon") {
  auto arrivals = make_sampler("exp:1");
  auto service = make_sampler("exp:2");
  RngStream rng(3);
  auto result = simulate_gg1(arrivals.sample, service.sample, 200000.0, rng);
  REQUIRE(result.time_avg_queue_length == Approx(1.0).epsilon(0.02));
  REQUIRE(result.mean_wait == Approx(0.5).epsilon(0.02));
  REQUIRE(result.mean_sojourn == Approx(1.0).epsilon(0.02));
  REQUIRE(result.busy_fraction == Approx(0.5).epsilon(0.01));

  const double little = result.arrival_rate * result.mean_sojourn;
  REQUIRE(std::fabs(result.time_avg_queue_length - little) /
              result.time_avg_queue_length <
          0.02);
}

TEST_CASE("busy periods of the markovian queue have the documented mean") {
  auto arrivals = make_sampler("exp:1");
  auto service = make_sampler("exp:2");
  RngStream rng(4);
  auto result = simulate_gg1(arrivals.sample, service.sample, 300000.0, rng);
  // (1/mu) / (1 - rho) = 0.5 / 0.5 = 1
  REQUIRE(result.mean_busy_period == Approx(1.0).epsilon(0.03));

  RngStream rng2(5);
  auto deterministic = simulate_gg1(arrivals.sample, [](RngStream&) { return 0.5; }, 300000.0,
                                    rng2);
  REQUIRE(deterministic.mean_busy_period == Approx(1.0).epsilon(0.03));
}

TEST_CASE("arrivals see time averages on the markovian queue") {
  auto arrivals = make_sampler("exp:1");
  auto service = make_sampler("exp:2");
  RngStream rng(6);
  auto result = simulate_gg1(arrivals.sample, service.sample, 120000.0, rng);

  long total_arrivals = 0;
  for (long c : result.arrival_seen) total_arrivals += c;
  REQUIRE(total_arrivals >= 100000);
  double l1 = 0.0;
  const std::size_t bins = std::max(result.arrival_seen.size(), result.time_in_state.size());
  for (std::size_t n = 0; n < bins; ++n) {
    const double seen =
        n < result.arrival_seen.size() ? result.arrival_seen[n] / double(total_arrivals) : 0.0;
    const double time_avg = n < result.time_in_state.size() ? result.time_in_state[n] : 0.0;
    l1 += std::fabs(seen - time_avg);
  }
  REQUIRE(l1 < 0.02);
}

TEST_CASE("departure stream of a stable markovian queue passes the Poisson test") {
  auto arrivals = make_sampler("exp:1");
  auto service = make_sampler("exp:2");
  RngStream rng(7);
  auto result = simulate_gg1(arrivals.sample, service.sample, 30000.0, rng);
  auto report = burke_departure_test(result.departures, 1.0);
  REQUIRE(report.ks_pass);
  REQUIRE(report.lag1_pass);
}

TEST_CASE("departure test needs enough departures") {
  std::vector<double> few(100, 1.0);
  REQUIRE_THROWS_AS(burke_departure_test(few, 1.0), Error);
}

TEST_CASE("deterministic service departures fail the Poisson test") {
  auto arrivals = make_sampler("exp:1");
  RngStream rng(8);
  auto result = simulate_gg1(arrivals.sample, [](RngStream&) { return 0.5; }, 30000.0, rng);
  auto report = burke_departure_test(result.departures, 1.0);
  REQUIRE_FALSE(report.ks_pass);
}
