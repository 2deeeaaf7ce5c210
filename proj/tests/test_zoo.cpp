#include <catch2/catch_amalgamated.hpp>

#include <chrono>

#include <stochastik/stochastik.hpp>

using namespace stochastik;

TEST_CASE("every bundled model verifies all its reference values") {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& name : zoo::list_models()) {
    auto report = zoo::verify(name);
    INFO("model " << name);
    for (const auto& entry : report.entries) {
      INFO(entry.quantity << ": expected " << entry.expected << ", got " << entry.actual);
      CHECK(entry.pass);
    }
    REQUIRE(report.all_pass);
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  REQUIRE(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 60);
}

TEST_CASE("every model carries a nonempty documented oracle list") {
  for (const auto& name : zoo::list_models()) {
    auto model = zoo::build(name);
    REQUIRE(model.name == name);
    REQUIRE_FALSE(model.oracles.empty());
    for (const auto& oracle : model.oracles) {
      REQUIRE_FALSE(oracle.quantity.empty());
      REQUIRE_FALSE(oracle.expected.empty());
      REQUIRE_FALSE(oracle.source.empty());
    }
  }
}

TEST_CASE("unknown names are rejected") {
  try {
    zoo::build("gryphon");
    FAIL("expected UnknownModel");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::UnknownModel);
  }
}

TEST_CASE("payloads expose valid chains and generators") {
  int chains = 0, generators = 0;
  for (const auto& name : zoo::list_models()) {
    auto model = zoo::build(name);
    if (model.chain) {
      ++chains;
      REQUIRE(model.chain->size() >= 2);
    }
    if (model.generator) {
      ++generators;
      REQUIRE(model.generator->size() >= 2);
    }
  }
  REQUIRE(chains >= 14);
  REQUIRE(generators >= 6);
}
