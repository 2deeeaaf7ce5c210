#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absorbing.hpp"
#include "chain.hpp"
#include "jump.hpp"
#include "queueing.hpp"
#include "stationary.hpp"

namespace stochastik {
namespace zoo {

// One checkable fact about a model: a quantity, its expected exact value, a
// short provenance note, and a closure that recomputes it through the library.
struct Oracle {
  std::string quantity;
  std::string expected;
  std::string source;
  std::function<std::pair<bool, std::string>()> check;
};

struct NamedModel {
  std::string name;
  std::string summary;
  std::optional<StochasticMatrix<Rational>> chain;
  std::optional<jump::Generator<Rational>> generator;
  std::vector<Oracle> oracles;
};

namespace detail {

inline Rational rat(long num, long den = 1) { return Rational(num, den); }

inline std::string show(const Rational& r) { return format_rational(r); }

inline std::string show_vector(const std::vector<Rational>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_rational(v[i]);
  }
  return out + ")";
}

inline std::pair<bool, std::string> expect_exact(const Rational& actual,
                                                 const Rational& expected) {
  return {actual == expected, show(actual)};
}

inline std::pair<bool, std::string> expect_close(double actual, double expected, double tol) {
  std::ostringstream oss;
  oss.precision(12);
  oss << actual;
  return {std::fabs(actual - expected) <= tol, oss.str()};
}

inline StochasticMatrix<Rational> parse_chain(std::vector<std::vector<std::string>> rows,
                                              std::vector<std::string> labels = {}) {
  const std::size_t n = rows.size();
  Matrix<Rational> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_rational(rows[i][j]);
  return StochasticMatrix<Rational>(std::move(m), std::move(labels));
}

// Uniform walk on an undirected graph: from each vertex, one incident edge is
// chosen with equal probability.
inline StochasticMatrix<Rational> graph_walk(std::size_t n,
                                             const std::vector<std::pair<int, int>>& edges,
                                             std::vector<std::string> labels = {}) {
  std::vector<std::vector<int>> adjacency(n);
  for (auto [a, b] : edges) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  Matrix<Rational> m(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i].empty()) throw Error(ErrorCode::BadInput, "isolated vertex in walk graph");
    for (int j : adjacency[i]) m(i, j) += Rational(1, adjacency[i].size());
  }
  return StochasticMatrix<Rational>(std::move(m), std::move(labels));
}

// Mean recurrence time to one state of a graph walk, exactly, through the
// detailed-balance certificate.
inline Rational walk_recurrence_time(const StochasticMatrix<Rational>& chain, int state) {
  auto cert = reversible_vector(chain);
  if (!cert.reversible) throw Error(ErrorCode::NotReversible, "graph walk must be reversible");
  return Rational(1) / cert.weights[state];
}

// Chessboard helpers; squares indexed file + 8 * rank, a1 = 0.
inline bool on_board(int f, int r) { return f >= 0 && f < 8 && r >= 0 && r < 8; }

inline std::vector<std::pair<int, int>> chess_edges(
    const std::function<std::vector<int>(int, int)>& moves_from) {
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < 8; ++r)
    for (int f = 0; f < 8; ++f)
      for (int target : moves_from(f, r))
        if (8 * r + f < target) edges.emplace_back(8 * r + f, target);
  return edges;
}

inline std::vector<int> ray_moves(int f, int r, const std::vector<std::pair<int, int>>& dirs) {
  std::vector<int> out;
  for (auto [df, dr] : dirs)
    for (int step = 1;; ++step) {
      int nf = f + df * step, nr = r + dr * step;
      if (!on_board(nf, nr)) break;
      out.push_back(8 * nr + nf);
    }
  return out;
}

}  // namespace detail

inline std::vector<std::string> list_models() {
  return {"mouse",        "coin_game",   "tennis",       "bilbo",       "mont_blanc",
          "diamond",      "chain_of_four", "asymmetric_square", "weather", "ehrenfest",
          "gambler_ruin", "knight",      "king",         "queen",       "bishop",
          "flea",         "ring",        "rate_square",  "businessman", "computer_store",
          "three_cycle_jump", "star_jump", "two_state_jump", "service_station"};
}

NamedModel build(const std::string& name);

namespace detail {

inline NamedModel build_mouse() {
  NamedModel model;
  model.name = "mouse";
  model.summary = "maze walk over five cells; food and nest absorb";
  model.chain = parse_chain({{"0", "1/3", "1/3", "0", "1/3"},
                             {"1/2", "0", "0", "1/2", "0"},
                             {"1/2", "0", "0", "1/2", "0"},
                             {"0", "0", "0", "1", "0"},
                             {"0", "0", "0", "0", "1"}},
                            {"cell1", "cell2", "cell3", "food", "nest"});
  auto chain = *model.chain;
  model.oracles.push_back(
      {"fundamental matrix", "[[3/2,1/2,1/2],[3/4,5/4,1/4],[3/4,1/4,5/4]]",
       "maze exercise: expected visit counts before absorption", [chain]() {
         auto dec = canonical_form(chain);
         const auto& f = fundamental_matrix(dec);
         Matrix<Rational> expected{{rat(3, 2), rat(1, 2), rat(1, 2)},
                                   {rat(3, 4), rat(5, 4), rat(1, 4)},
                                   {rat(3, 4), rat(1, 4), rat(5, 4)}};
         std::ostringstream oss;
         oss << (f == expected ? "match" : "mismatch");
         return std::pair<bool, std::string>{f == expected, oss.str()};
       }});
  model.oracles.push_back({"P(reach food from cell 1)", "1/2",
                           "maze exercise: absorption split from the start cell", [chain]() {
                             auto dec = canonical_form(chain);
                             const auto& b = absorption_probabilities(dec);
                             return expect_exact(b(0, 0), rat(1, 2));
                           }});
  model.oracles.push_back({"E(absorption time from cell 1)", "5/2",
                           "maze exercise: mean trip length", [chain]() {
                             auto dec = canonical_form(chain);
                             return expect_exact(expected_absorption_times(dec)[0], rat(5, 2));
                           }});
  return model;
}

inline NamedModel build_coin_game() {
  NamedModel model;
  model.name = "coin_game";
  model.summary = "two players race for FFF vs PFP over repeated fair flips";
  model.chain = parse_chain({{"1/2", "1/2", "0", "0", "0", "0"},
                             {"0", "0", "0", "1/2", "0", "1/2"},
                             {"1/2", "1/2", "0", "0", "0", "0"},
                             {"0", "0", "1/2", "0", "1/2", "0"},
                             {"0", "0", "0", "0", "1", "0"},
                             {"0", "0", "0", "0", "0", "1"}},
                            {"PP", "PF", "FP", "FF", "A_wins", "B_wins"});
  auto chain = *model.chain;
  model.oracles.push_back(
      {"fundamental matrix", "[[7/3,4/3,1/3,2/3],[1/3,4/3,1/3,2/3],[4/3,4/3,4/3,2/3],[2/3,2/3,2/3,4/3]]",
       "coin-flip race: expected visit counts", [chain]() {
         auto dec = canonical_form(chain);
         Matrix<Rational> expected{{rat(7, 3), rat(4, 3), rat(1, 3), rat(2, 3)},
                                   {rat(1, 3), rat(4, 3), rat(1, 3), rat(2, 3)},
                                   {rat(4, 3), rat(4, 3), rat(4, 3), rat(2, 3)},
                                   {rat(2, 3), rat(2, 3), rat(2, 3), rat(4, 3)}};
         bool ok = fundamental_matrix(dec) == expected;
         return std::pair<bool, std::string>{ok, ok ? "match" : "mismatch"};
       }});
  model.oracles.push_back(
      {"absorption matrix", "[[1/3,2/3],[1/3,2/3],[1/3,2/3],[2/3,1/3]]",
       "coin-flip race: who wins from each prefix", [chain]() {
         auto dec = canonical_form(chain);
         Matrix<Rational> expected{{rat(1, 3), rat(2, 3)},
                                   {rat(1, 3), rat(2, 3)},
                                   {rat(1, 3), rat(2, 3)},
                                   {rat(2, 3), rat(1, 3)}};
         bool ok = absorption_probabilities(dec) == expected;
         return std::pair<bool, std::string>{ok, ok ? "match" : "mismatch"};
       }});
  model.oracles.push_back(
      {"P(first player wins), uniform start over prefixes", "5/12",
       "coin-flip race: equal chances after the first two flips", [chain]() {
         auto dec = canonical_form(chain);
         const auto& b = absorption_probabilities(dec);
         Rational value(0);
         for (int i = 0; i < 4; ++i) value += rat(1, 4) * b(i, 0);
         return expect_exact(value, rat(5, 12));
       }});
  model.oracles.push_back({"E(absorption time from PP)", "14/3",
                           "coin-flip race: mean remaining flips", [chain]() {
                             auto dec = canonical_form(chain);
                             return expect_exact(expected_absorption_times(dec)[0], rat(14, 3));
                           }});
  model.oracles.push_back(
      {"mean game length (two setup flips + averaged absorption)", "35/6",
       "coin-flip race: total flips until someone wins", [chain]() {
         auto dec = canonical_form(chain);
         Distribution<Rational> uniform_start(std::vector<Rational>{
             rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4), rat(0), rat(0)});
         Rational value = rat(2) + initial_averaged_absorption_time(dec, uniform_start);
         return expect_exact(value, rat(35, 6));
       }});
  return model;
}

inline NamedModel build_tennis() {
  NamedModel model;
  model.name = "tennis";
  model.summary = "deuce game: first player wins each point with probability 3/5";
  model.chain = parse_chain({{"0", "3/5", "2/5", "0", "0"},
                             {"2/5", "0", "0", "3/5", "0"},
                             {"3/5", "0", "0", "0", "2/5"},
                             {"0", "0", "0", "1", "0"},
                             {"0", "0", "0", "0", "1"}},
                            {"deuce", "adv_A", "adv_B", "A_wins", "B_wins"});
  auto chain = *model.chain;
  model.oracles.push_back(
      {"fundamental matrix", "(1/13)[[25,15,10],[10,19,4],[15,9,19]]",
       "deuce game: expected visit counts", [chain]() {
         auto dec = canonical_form(chain);
         Matrix<Rational> expected{{rat(25, 13), rat(15, 13), rat(10, 13)},
                                   {rat(10, 13), rat(19, 13), rat(4, 13)},
                                   {rat(15, 13), rat(9, 13), rat(19, 13)}};
         bool ok = fundamental_matrix(dec) == expected;
         return std::pair<bool, std::string>{ok, ok ? "match" : "mismatch"};
       }});
  model.oracles.push_back({"P(A wins from deuce)", "9/13",
                           "deuce game: win split", [chain]() {
                             auto dec = canonical_form(chain);
                             return expect_exact(absorption_probabilities(dec)(0, 0), rat(9, 13));
                           }});
  model.oracles.push_back({"E(points from deuce)", "50/13",
                           "deuce game: mean duration", [chain]() {
                             auto dec = canonical_form(chain);
                             return expect_exact(expected_absorption_times(dec)[0], rat(50, 13));
                           }});
  return model;
}

inline NamedModel build_bilbo() {
  NamedModel model;
  model.name = "bilbo";
  model.summary = "blind cave walk; one cave and the open air absorb";
  model.chain = parse_chain({{"0", "1/3", "1/3", "1/3", "0"},
                             {"1/4", "0", "1/4", "1/4", "1/4"},
                             {"1/3", "1/3", "0", "0", "1/3"},
                             {"0", "0", "0", "1", "0"},
                             {"0", "0", "0", "0", "1"}},
                            {"cave1", "cave2", "cave3", "gollum", "outside"});
  auto chain = *model.chain;
  model.oracles.push_back(
      {"fundamental matrix", "(1/24)[[33,16,15],[12,32,12],[15,16,33]]",
       "cave walk: expected visit counts", [chain]() {
         auto dec = canonical_form(chain);
         Matrix<Rational> expected{{rat(33, 24), rat(16, 24), rat(15, 24)},
                                   {rat(12, 24), rat(32, 24), rat(12, 24)},
                                   {rat(15, 24), rat(16, 24), rat(33, 24)}};
         bool ok = fundamental_matrix(dec) == expected;
         return std::pair<bool, std::string>{ok, ok ? "match" : "mismatch"};
       }});
  model.oracles.push_back({"P(reach the open air from cave 1)", "3/8",
                           "cave walk: escape probability", [chain]() {
                             auto dec = canonical_form(chain);
                             return expect_exact(absorption_probabilities(dec)(0, 1), rat(3, 8));
                           }});
  model.oracles.push_back({"E(galleries crossed from cave 1)", "8/3",
                           "cave walk: mean number of galleries", [chain]() {
                             auto dec = canonical_form(chain);
                             return expect_exact(expected_absorption_times(dec)[0], rat(8, 3));
                           }});
  return model;
}

// Climb with weather probability p: advance one stage on good weather, drop
// one on bad; giving up and the summit absorb.
inline StochasticMatrix<Rational> mont_blanc_chain(const Rational& p) {
  const Rational q = Rational(1) - p;
  Matrix<Rational> m(4, 4, Rational(0));
  m(0, 1) = p;
  m(0, 2) = q;
  m(1, 0) = q;
  m(1, 3) = p;
  m(2, 2) = Rational(1);
  m(3, 3) = Rational(1);
  return StochasticMatrix<Rational>(std::move(m), {"camp1", "camp2", "base", "summit"});
}

inline NamedModel build_mont_blanc() {
  NamedModel model;
  model.name = "mont_blanc";
  model.summary = "two-stage climb, weather-driven; parametric success probability";
  model.chain = mont_blanc_chain(Rational(1, 2));
  model.oracles.push_back(
      {"summit probability at p=1/3", "p^2/(1-pq) = (1/9)/(1-2/9) = 1/7",
       "climb exercise: closed form checked pointwise", []() {
         auto chain = mont_blanc_chain(Rational(1, 3));
         auto dec = canonical_form(chain);
         return expect_exact(absorption_probabilities(dec)(0, 1), rat(1, 7));
       }});
  model.oracles.push_back(
      {"summit probability at p=2/5", "p^2/(1-pq) = (4/25)/(1-6/25) = 4/19",
       "climb exercise: closed form checked pointwise", []() {
         auto chain = mont_blanc_chain(Rational(2, 5));
         auto dec = canonical_form(chain);
         return expect_exact(absorption_probabilities(dec)(0, 1), rat(4, 19));
       }});
  model.oracles.push_back(
      {"summit probability at p* = (sqrt(5)-1)/2", "1/2",
       "climb exercise: the even-odds weather threshold", []() {
         const double p = (std::sqrt(5.0) - 1.0) / 2.0;
         Matrix<double> m(4, 4, 0.0);
         m(0, 1) = p;
         m(0, 2) = 1 - p;
         m(1, 0) = 1 - p;
         m(1, 3) = p;
         m(2, 2) = 1;
         m(3, 3) = 1;
         StochasticMatrix<double> chain(std::move(m));
         auto dec = canonical_form(chain);
         return expect_close(absorption_probabilities(dec)(0, 1), 0.5, 1e-9);
       }});
  model.oracles.push_back(
      {"mean climb days at p*", "(1+p*)/(1-p*(1-p*)) ~ 2.118033988750",
       "climb exercise: mean duration at the threshold", []() {
         const double p = (std::sqrt(5.0) - 1.0) / 2.0;
         Matrix<double> m(4, 4, 0.0);
         m(0, 1) = p;
         m(0, 2) = 1 - p;
         m(1, 0) = 1 - p;
         m(1, 3) = p;
         m(2, 2) = 1;
         m(3, 3) = 1;
         StochasticMatrix<double> chain(std::move(m));
         auto dec = canonical_form(chain);
         const double expected = (1 + p) / (1 - p * (1 - p));
         return expect_close(expected_absorption_times(dec)[0], expected, 1e-9);
       }});
  return model;
}

inline NamedModel build_diamond() {
  NamedModel model;
  model.name = "diamond";
  model.summary = "four-state regular chain with lazy middle states";
  model.chain = parse_chain({{"0", "1/2", "1/2", "0"},
                             {"1/16", "7/16", "0", "1/2"},
                             {"1/16", "0", "7/16", "1/2"},
                             {"0", "1/4", "1/4", "1/2"}});
  auto chain = *model.chain;
  model.oracles.push_back({"stationary law", "(1,8,8,16)/33",
                           "regular-chain exercise: stationary solve", [chain]() {
                             auto pi = stationary_distribution(chain);
                             std::vector<Rational> expected{rat(1, 33), rat(8, 33), rat(8, 33),
                                                            rat(16, 33)};
                             bool ok = pi.probs() == expected;
                             return std::pair<bool, std::string>{ok, show_vector(pi.probs())};
                           }});
  model.oracles.push_back({"regular with witness exponent 2", "true",
                           "regular-chain exercise: second power strictly positive", [chain]() {
                             auto cls = classify(chain);
                             bool ok = cls.regular && cls.regular_witness == 2;
                             return std::pair<bool, std::string>{
                                 ok, cls.regular ? "witness " + std::to_string(*cls.regular_witness)
                                                 : "not regular"};
                           }});
  return model;
}

inline NamedModel build_chain_of_four() {
  NamedModel model;
  model.name = "chain_of_four";
  model.summary = "path walk on four states with a lazy second state";
  model.chain = parse_chain({{"0", "1", "0", "0"},
                             {"1/4", "1/2", "1/4", "0"},
                             {"0", "1/2", "0", "1/2"},
                             {"0", "0", "1", "0"}});
  auto chain = *model.chain;
  model.oracles.push_back({"stationary law", "(1/8,1/2,1/4,1/8)",
                           "path-walk exercise: stationary solve", [chain]() {
                             auto pi = stationary_distribution(chain);
                             std::vector<Rational> expected{rat(1, 8), rat(1, 2), rat(1, 4),
                                                            rat(1, 8)};
                             bool ok = pi.probs() == expected;
                             return std::pair<bool, std::string>{ok, show_vector(pi.probs())};
                           }});
  model.oracles.push_back({"reversible", "true", "path-walk exercise: balance along a path",
                           [chain]() {
                             auto cert = reversible_vector(chain);
                             return std::pair<bool, std::string>{cert.reversible,
                                                                 cert.reversible ? "yes" : "no"};
                           }});
  model.oracles.push_back({"regular with witness exponent 4", "true",
                           "path-walk exercise: fourth power strictly positive", [chain]() {
                             auto cls = classify(chain);
                             bool ok = cls.regular && cls.regular_witness == 4;
                             return std::pair<bool, std::string>{
                                 ok, cls.regular ? "witness " + std::to_string(*cls.regular_witness)
                                                 : "not regular"};
                           }});
  return model;
}

inline NamedModel build_asymmetric_square() {
  NamedModel model;
  model.name = "asymmetric_square";
  model.summary = "regular four-state chain whose time reversal differs";
  model.chain = parse_chain({{"0", "1/2", "0", "1/2"},
                             {"1/2", "0", "1/2", "0"},
                             {"1/2", "0", "1/2", "0"},
                             {"0", "1/2", "0", "1/2"}});
  auto chain = *model.chain;
  model.oracles.push_back({"stationary law", "(1/4,1/4,1/4,1/4)",
                           "square-walk exercise: uniform stationary law", [chain]() {
                             auto pi = stationary_distribution(chain);
                             std::vector<Rational> expected(4, rat(1, 4));
                             bool ok = pi.probs() == expected;
                             return std::pair<bool, std::string>{ok, show_vector(pi.probs())};
                           }});
  model.oracles.push_back(
      {"not reversible, witness pair (0,2)", "flow 0->2 is zero, 2->0 is not",
       "square-walk exercise: detailed balance fails on one pair", [chain]() {
         auto cert = reversible_vector(chain);
         bool ok = !cert.reversible &&
                   ((cert.violation == std::pair<int, int>{0, 2}) ||
                    (cert.violation == std::pair<int, int>{2, 0}));
         std::string actual = cert.reversible
                                  ? "reversible"
                                  : "violation (" + std::to_string(cert.violation.first) + "," +
                                        std::to_string(cert.violation.second) + ")";
         return std::pair<bool, std::string>{ok, actual};
       }});
  return model;
}

inline NamedModel build_weather() {
  NamedModel model;
  model.name = "weather";
  model.summary = "three-state weather chain: fine, rain, snow";
  model.chain = parse_chain({{"1/4", "3/4", "0"},
                             {"1/2", "1/3", "1/6"},
                             {"0", "1/2", "1/2"}},
                            {"fine", "rain", "snow"});
  auto chain = *model.chain;
  model.oracles.push_back({"stationary law", "(1/3,1/2,1/6)",
                           "weather exercise: long-run frequencies", [chain]() {
                             auto pi = stationary_distribution(chain);
                             std::vector<Rational> expected{rat(1, 3), rat(1, 2), rat(1, 6)};
                             bool ok = pi.probs() == expected;
                             return std::pair<bool, std::string>{ok, show_vector(pi.probs())};
                           }});
  model.oracles.push_back({"mean gap between snowy days", "6",
                           "weather exercise: recurrence time of snow", [chain]() {
                             auto pi = stationary_distribution(chain);
                             return expect_exact(mean_recurrence_times(pi)[2], rat(6));
                           }});
  return model;
}

inline StochasticMatrix<Rational> ehrenfest_chain(long balls) {
  Matrix<Rational> m(balls + 1, balls + 1, Rational(0));
  for (long i = 0; i <= balls; ++i) {
    if (i > 0) m(i, i - 1) = Rational(i, balls);
    if (i < balls) m(i, i + 1) = Rational(balls - i, balls);
  }
  return StochasticMatrix<Rational>(std::move(m));
}

inline NamedModel build_ehrenfest() {
  NamedModel model;
  model.name = "ehrenfest";
  model.summary = "urn exchange with 3 balls; count in the left urn";
  model.chain = ehrenfest_chain(3);
  auto chain = *model.chain;
  model.oracles.push_back(
      {"stationary law", "binomial(3, 1/2) = (1,3,3,1)/8",
       "urn model: stationary law is binomial", [chain]() {
         auto pi = stationary_distribution(chain);
         std::vector<Rational> expected{rat(1, 8), rat(3, 8), rat(3, 8), rat(1, 8)};
         bool ok = pi.probs() == expected;
         return std::pair<bool, std::string>{ok, show_vector(pi.probs())};
       }});
  model.oracles.push_back({"irreducible but not regular, period 2", "true",
                           "urn model: parity alternates each move", [chain]() {
                             auto cls = classify(chain);
                             bool ok = cls.irreducible && !cls.regular && cls.period[0] == 2;
                             return std::pair<bool, std::string>{
                                 ok, "irreducible=" + std::to_string(cls.irreducible) +
                                         " regular=" + std::to_string(cls.regular) +
                                         " period=" + std::to_string(cls.period[0])};
                           }});
  model.oracles.push_back(
      {"mean recurrence to the full urn (N balls left)", "8",
       "urn model: 2^N steps between extreme states", [chain]() {
         auto pi = stationary_distribution(chain);
         return expect_exact(mean_recurrence_times(pi)[3], rat(8));
       }});
  return model;
}

inline NamedModel build_gambler_ruin() {
  NamedModel model;
  const long n = 10;
  model.name = "gambler_ruin";
  model.summary = "fair-coin fortune walk on 0..10, absorbed at both ends";
  Matrix<Rational> m(n + 1, n + 1, Rational(0));
  m(0, 0) = Rational(1);
  m(n, n) = Rational(1);
  for (long i = 1; i < n; ++i) {
    m(i, i - 1) = Rational(1, 2);
    m(i, i + 1) = Rational(1, 2);
  }
  model.chain = StochasticMatrix<Rational>(std::move(m));
  auto chain = *model.chain;
  model.oracles.push_back(
      {"P(hit 10 before 0 | start i) = i/10 for all i", "i/10",
       "fair-game ruin: linear hitting probabilities", [chain]() {
         auto dec = canonical_form(chain);
         const auto& b = absorption_probabilities(dec);
         // transient states are 1..9 in order; absorbing 0 then 10
         for (long i = 1; i <= 9; ++i)
           if (b(i - 1, 1) != Rational(i, 10))
             return std::pair<bool, std::string>{false, "mismatch at " + std::to_string(i)};
         return std::pair<bool, std::string>{true, "match"};
       }});
  model.oracles.push_back(
      {"E(absorption | start i) = i(10-i) for all i", "i(10-i)",
       "fair-game ruin: quadratic mean duration", [chain]() {
         auto dec = canonical_form(chain);
         auto times = expected_absorption_times(dec);
         for (long i = 1; i <= 9; ++i)
           if (times[i - 1] != Rational(i * (10 - i)))
             return std::pair<bool, std::string>{false, "mismatch at " + std::to_string(i)};
         return std::pair<bool, std::string>{true, "match"};
       }});
  return model;
}

inline NamedModel build_chess(const std::string& name) {
  NamedModel model;
  model.name = name;
  std::vector<std::pair<int, int>> edges;
  Rational expected;
  int corner = 0;
  if (name == "knight") {
    model.summary = "uniform knight walk on the 8x8 board";
    edges = chess_edges([](int f, int r) {
      std::vector<int> out;
      const int df[] = {1, 1, -1, -1, 2, 2, -2, -2};
      const int dr[] = {2, -2, 2, -2, 1, -1, 1, -1};
      for (int k = 0; k < 8; ++k)
        if (on_board(f + df[k], r + dr[k])) out.push_back(8 * (r + dr[k]) + f + df[k]);
      return out;
    });
    expected = rat(168);
  } else if (name == "king") {
    model.summary = "uniform king walk on the 8x8 board";
    edges = chess_edges([](int f, int r) {
      std::vector<int> out;
      for (int df = -1; df <= 1; ++df)
        for (int dr = -1; dr <= 1; ++dr) {
          if (df == 0 && dr == 0) continue;
          if (on_board(f + df, r + dr)) out.push_back(8 * (r + dr) + f + df);
        }
      return out;
    });
    expected = rat(140);
  } else {  // queen
    model.summary = "uniform queen walk on the 8x8 board";
    edges = chess_edges([](int f, int r) {
      return ray_moves(f, r,
                       {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    });
    expected = rat(208, 3);
  }
  model.chain = graph_walk(64, edges);
  auto chain = *model.chain;
  model.oracles.push_back(
      {"mean recurrence to the corner", format_rational(expected),
       "piece-walk exercise: degree-sum over corner degree", [chain, expected, corner]() {
         return expect_exact(walk_recurrence_time(chain, corner), expected);
       }});
  return model;
}

inline NamedModel build_bishop() {
  NamedModel model;
  model.name = "bishop";
  model.summary = "uniform bishop walk on the 32 squares of the corner's color";
  // squares with (f + r) even share the a1 corner's color
  std::vector<int> squares;
  std::vector<int> index_of(64, -1);
  for (int r = 0; r < 8; ++r)
    for (int f = 0; f < 8; ++f)
      if ((f + r) % 2 == 0) {
        index_of[8 * r + f] = static_cast<int>(squares.size());
        squares.push_back(8 * r + f);
      }
  std::vector<std::pair<int, int>> edges;
  for (int sq : squares) {
    int f = sq % 8, r = sq / 8;
    for (int target : ray_moves(f, r, {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}))
      if (sq < target) edges.emplace_back(index_of[sq], index_of[target]);
  }
  model.chain = graph_walk(squares.size(), edges);
  auto chain = *model.chain;
  model.oracles.push_back({"mean recurrence to the corner", "40",
                           "piece-walk exercise: one color class only", [chain]() {
                             return expect_exact(walk_recurrence_time(chain, 0), rat(40));
                           }});
  return model;
}

inline NamedModel build_flea() {
  NamedModel model;
  model.name = "flea";
  model.summary = "uniform hop on a triangular lattice with five rows";
  // nodes (row, col), 0 <= col <= row <= 4, numbered row by row
  auto id = [](int row, int col) { return row * (row + 1) / 2 + col; };
  std::vector<std::pair<int, int>> edges;
  for (int row = 0; row <= 4; ++row)
    for (int col = 0; col <= row; ++col) {
      if (col + 1 <= row) edges.emplace_back(id(row, col), id(row, col + 1));
      if (row + 1 <= 4) {
        edges.emplace_back(id(row, col), id(row + 1, col));
        edges.emplace_back(id(row, col), id(row + 1, col + 1));
      }
    }
  model.chain = graph_walk(15, edges);
  auto chain = *model.chain;
  const int corner = id(4, 0);
  model.oracles.push_back({"mean recurrence to the bottom-left corner", "30",
                           "lattice-hop exercise: 60/2", [chain, corner]() {
                             return expect_exact(walk_recurrence_time(chain, corner), rat(30));
                           }});
  return model;
}

inline StochasticMatrix<Rational> ring_chain(long n, const Rational& p) {
  Matrix<Rational> m(n, n, Rational(0));
  for (long i = 0; i < n; ++i) {
    m(i, (i + 1) % n) = p;
    m(i, (i + n - 1) % n) = Rational(1) - p;
  }
  return StochasticMatrix<Rational>(std::move(m));
}

inline NamedModel build_ring() {
  NamedModel model;
  model.name = "ring";
  model.summary = "biased walk on a five-cycle";
  model.chain = ring_chain(5, Rational(2, 3));
  auto chain = *model.chain;
  model.oracles.push_back({"stationary law is uniform", "(1/5,...)",
                           "cycle-walk exercise: uniform for any bias", [chain]() {
                             auto pi = stationary_distribution(chain);
                             for (std::size_t i = 0; i < 5; ++i)
                               if (pi[i] != rat(1, 5))
                                 return std::pair<bool, std::string>{false, show_vector(pi.probs())};
                             return std::pair<bool, std::string>{true, "uniform"};
                           }});
  model.oracles.push_back({"reversible only at p = 1/2", "biased no, symmetric yes",
                           "cycle-walk exercise: balance needs equal hop rates", []() {
                             bool biased = reversible_vector(ring_chain(5, Rational(2, 3))).reversible;
                             bool fair = reversible_vector(ring_chain(5, Rational(1, 2))).reversible;
                             bool ok = !biased && fair;
                             return std::pair<bool, std::string>{
                                 ok, std::string("biased=") + (biased ? "yes" : "no") +
                                         " symmetric=" + (fair ? "yes" : "no")};
                           }});
  return model;
}

inline jump::Generator<Rational> rational_generator(std::vector<std::vector<std::string>> rows,
                                                    std::vector<std::string> labels = {}) {
  const std::size_t n = rows.size();
  Matrix<Rational> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_rational(rows[i][j]);
  return jump::Generator<Rational>(std::move(m), std::move(labels));
}

inline NamedModel build_rate_square() {
  NamedModel model;
  model.name = "rate_square";
  model.summary = "four-state jump process with asymmetric rates";
  model.generator = rational_generator({{"-2", "1", "1", "0"},
                                        {"2", "-5", "1", "2"},
                                        {"2", "0", "-3", "1"},
                                        {"0", "0", "1", "-1"}});
  auto gen = *model.generator;
  model.oracles.push_back({"stationary law", "(5,1,4,6)/16",
                           "jump-rate exercise: pi L = 0", [gen]() {
                             auto pi = jump::stationary_jump(gen);
                             std::vector<Rational> expected{rat(5, 16), rat(1, 16), rat(4, 16),
                                                            rat(6, 16)};
                             bool ok = pi.probs() == expected;
                             return std::pair<bool, std::string>{ok, show_vector(pi.probs())};
                           }});
  model.oracles.push_back({"irreducible but not reversible", "true",
                           "jump-rate exercise: one-way edges break balance", [gen]() {
                             auto cert = jump::detailed_balance_jump(gen);
                             return std::pair<bool, std::string>{!cert.reversible,
                                                                 cert.reversible ? "reversible"
                                                                                 : "not reversible"};
                           }});
  return model;
}

inline NamedModel build_businessman() {
  NamedModel model;
  model.name = "businessman";
  model.summary = "traveler rotating between three cities at exponential sojourns";
  model.generator = rational_generator({{"-4", "2", "2"},
                                        {"3", "-4", "1"},
                                        {"5", "0", "-5"}},
                                       {"paris", "bordeaux", "marseille"});
  auto gen = *model.generator;
  model.oracles.push_back({"fraction of time per city", "(1/2,1/4,1/4)",
                           "travel exercise: stationary occupation", [gen]() {
                             auto pi = jump::stationary_jump(gen);
                             std::vector<Rational> expected{rat(1, 2), rat(1, 4), rat(1, 4)};
                             bool ok = pi.probs() == expected;
                             return std::pair<bool, std::string>{ok, show_vector(pi.probs())};
                           }});
  model.oracles.push_back({"first-to-second-city trips per year", "12",
                           "travel exercise: pi(paris) q(paris,bordeaux) * 12 months", [gen]() {
                             auto pi = jump::stationary_jump(gen);
                             return expect_exact(pi[0] * gen.rate(0, 1) * rat(12), rat(12));
                           }});
  return model;
}

inline NamedModel build_computer_store() {
  NamedModel model;
  model.name = "computer_store";
  model.summary = "stock of 0..3 machines; sales at rate 2, restock pairs at rate 1";
  model.generator = rational_generator({{"-1", "0", "1", "0"},
                                        {"2", "-3", "0", "1"},
                                        {"0", "2", "-2", "0"},
                                        {"0", "0", "2", "-2"}},
                                       {"stock0", "stock1", "stock2", "stock3"});
  auto gen = *model.generator;
  model.oracles.push_back({"stationary law", "(2/5,1/5,3/10,1/10)",
                           "inventory exercise: stationary stock levels", [gen]() {
                             auto pi = jump::stationary_jump(gen);
                             std::vector<Rational> expected{rat(2, 5), rat(1, 5), rat(3, 10),
                                                            rat(1, 10)};
                             bool ok = pi.probs() == expected;
                             return std::pair<bool, std::string>{ok, show_vector(pi.probs())};
                           }});
  model.oracles.push_back({"sales rate", "2 * (1 - pi(0)) = 6/5 per week",
                           "inventory exercise: sales happen while stocked", [gen]() {
                             auto pi = jump::stationary_jump(gen);
                             return expect_exact(rat(2) * (rat(1) - pi[0]), rat(6, 5));
                           }});
  return model;
}

inline NamedModel build_three_cycle_jump() {
  NamedModel model;
  model.name = "three_cycle_jump";
  model.summary = "one-way rotation over three states at unit rate";
  model.generator = rational_generator({{"-1", "1", "0"},
                                        {"0", "-1", "1"},
                                        {"1", "0", "-1"}});
  auto gen = *model.generator;
  model.oracles.push_back({"stationary law", "(1/3,1/3,1/3)",
                           "rotation exercise: uniform occupation", [gen]() {
                             auto pi = jump::stationary_jump(gen);
                             bool ok = pi.probs() == std::vector<Rational>(3, rat(1, 3));
                             return std::pair<bool, std::string>{ok, show_vector(pi.probs())};
                           }});
  model.oracles.push_back({"not reversible", "true",
                           "rotation exercise: no return edges at all", [gen]() {
                             auto cert = jump::detailed_balance_jump(gen);
                             return std::pair<bool, std::string>{!cert.reversible,
                                                                 cert.reversible ? "reversible"
                                                                                 : "not reversible"};
                           }});
  return model;
}

inline NamedModel build_star_jump() {
  NamedModel model;
  const long n_leaves = 4;
  model.name = "star_jump";
  model.summary = "hub-and-leaf jumps: out at rate 1 to each leaf, back at rate 2";
  Matrix<Rational> m(n_leaves + 1, n_leaves + 1, Rational(0));
  m(0, 0) = Rational(-n_leaves);
  for (long leaf = 1; leaf <= n_leaves; ++leaf) {
    m(0, leaf) = Rational(1);
    m(leaf, 0) = Rational(2);
    m(leaf, leaf) = Rational(-2);
  }
  model.generator = jump::Generator<Rational>(std::move(m));
  auto gen = *model.generator;
  model.oracles.push_back(
      {"reversible with law (mu, lambda, ..., lambda)/(mu + N lambda)", "(2,1,1,1,1)/6",
       "star exercise: balance on every spoke", [gen]() {
         auto cert = jump::detailed_balance_jump(gen);
         if (!cert.reversible) return std::pair<bool, std::string>{false, "not reversible"};
         std::vector<Rational> expected{rat(2, 6), rat(1, 6), rat(1, 6), rat(1, 6), rat(1, 6)};
         bool ok = cert.weights == expected;
         return std::pair<bool, std::string>{ok, show_vector(cert.weights)};
       }});
  return model;
}

inline NamedModel build_two_state_jump() {
  NamedModel model;
  model.name = "two_state_jump";
  model.summary = "two states exchanging at rates 1 and 2";
  model.generator = rational_generator({{"-1", "1"}, {"2", "-2"}});
  auto gen = *model.generator;
  model.oracles.push_back({"stationary law", "(mu,lambda)/(lambda+mu) = (2/3,1/3)",
                           "two-state process: stationary split", [gen]() {
                             auto pi = jump::stationary_jump(gen);
                             std::vector<Rational> expected{rat(2, 3), rat(1, 3)};
                             bool ok = pi.probs() == expected;
                             return std::pair<bool, std::string>{ok, show_vector(pi.probs())};
                           }});
  model.oracles.push_back(
      {"kernel at t=1 matches the closed form", "within 1e-10",
       "two-state process: explicit exponential of the rate matrix", []() {
         Matrix<double> m{{-1.0, 1.0}, {2.0, -2.0}};
         jump::Generator<double> gen_f(std::move(m));
         auto kernel = jump::transition_kernel(gen_f, 1.0);
         const double lambda = 1.0, mu = 2.0, t = 1.0;
         const double decay = std::exp(-(lambda + mu) * t);
         const double denom = lambda + mu;
         double worst = 0.0;
         worst = std::max(worst, std::fabs(kernel(0, 0) - (mu + lambda * decay) / denom));
         worst = std::max(worst, std::fabs(kernel(0, 1) - (lambda - lambda * decay) / denom));
         worst = std::max(worst, std::fabs(kernel(1, 0) - (mu - mu * decay) / denom));
         worst = std::max(worst, std::fabs(kernel(1, 1) - (lambda + mu * decay) / denom));
         std::ostringstream oss;
         oss << "max deviation " << worst;
         return std::pair<bool, std::string>{worst <= 1e-10, oss.str()};
       }});
  return model;
}

inline NamedModel build_service_station() {
  NamedModel model;
  model.name = "service_station";
  model.summary = "single pump, 20 cars/h, 2-minute service; plus a 2-car cap variant";
  model.oracles.push_back(
      {"unbounded queue: stationary law", "pi(n) = (1/3)(2/3)^n",
       "service-station exercise: geometric law", []() {
         auto m = queueing::mm1<Rational>(rat(20), rat(30));
         for (long n = 0; n <= 6; ++n) {
           Rational expected = rat(1, 3);
           for (long i = 0; i < n; ++i) expected *= rat(2, 3);
           if (m.stationary(n) != expected)
             return std::pair<bool, std::string>{false, "mismatch at n=" + std::to_string(n)};
         }
         return std::pair<bool, std::string>{true, "match"};
       }});
  model.oracles.push_back({"unbounded queue: mean wait", "1/15 h = 4 min",
                           "service-station exercise: wait before the pump", []() {
                             auto m = queueing::mm1<Rational>(rat(20), rat(30));
                             return expect_exact(m.mean_wait, rat(1, 15));
                           }});
  model.oracles.push_back({"unbounded queue: mean sojourn", "1/10 h = 6 min",
                           "service-station exercise: wait plus service", []() {
                             auto m = queueing::mm1<Rational>(rat(20), rat(30));
                             return expect_exact(m.mean_sojourn, rat(1, 10));
                           }});
  model.oracles.push_back({"unbounded queue: P(wait)", "2/3",
                           "service-station exercise: pump busy at arrival", []() {
                             auto m = queueing::mm1<Rational>(rat(20), rat(30));
                             return expect_exact(m.wait_probability, rat(2, 3));
                           }});
  model.oracles.push_back({"capped at 2 cars: stationary law", "(9,6,4)/19",
                           "service-station exercise: finite buffer variant", []() {
                             auto m = queueing::mm1n<Rational>(rat(20), rat(30), 2);
                             bool ok = m.stationary(0) == rat(9, 19) &&
                                       m.stationary(1) == rat(6, 19) &&
                                       m.stationary(2) == rat(4, 19);
                             return std::pair<bool, std::string>{
                                 ok, show_vector({m.stationary(0), m.stationary(1),
                                                  m.stationary(2)})};
                           }});
  model.oracles.push_back({"capped at 2 cars: loss probability", "4/19",
                           "service-station exercise: balking fraction", []() {
                             auto m = queueing::mm1n<Rational>(rat(20), rat(30), 2);
                             return expect_exact(*m.loss_probability, rat(4, 19));
                           }});
  return model;
}

}  // namespace detail

inline NamedModel build(const std::string& name) {
  if (name == "mouse") return detail::build_mouse();
  if (name == "coin_game") return detail::build_coin_game();
  if (name == "tennis") return detail::build_tennis();
  if (name == "bilbo") return detail::build_bilbo();
  if (name == "mont_blanc") return detail::build_mont_blanc();
  if (name == "diamond") return detail::build_diamond();
  if (name == "chain_of_four") return detail::build_chain_of_four();
  if (name == "asymmetric_square") return detail::build_asymmetric_square();
  if (name == "weather") return detail::build_weather();
  if (name == "ehrenfest") return detail::build_ehrenfest();
  if (name == "gambler_ruin") return detail::build_gambler_ruin();
  if (name == "knight" || name == "king" || name == "queen") return detail::build_chess(name);
  if (name == "bishop") return detail::build_bishop();
  if (name == "flea") return detail::build_flea();
  if (name == "ring") return detail::build_ring();
  if (name == "rate_square") return detail::build_rate_square();
  if (name == "businessman") return detail::build_businessman();
  if (name == "computer_store") return detail::build_computer_store();
  if (name == "three_cycle_jump") return detail::build_three_cycle_jump();
  if (name == "star_jump") return detail::build_star_jump();
  if (name == "two_state_jump") return detail::build_two_state_jump();
  if (name == "service_station") return detail::build_service_station();
  throw Error(ErrorCode::UnknownModel, "no model named '" + name + "'");
}

struct VerifyEntry {
  std::string quantity;
  std::string expected;
  std::string actual;
  std::string source;
  bool pass;
};

struct VerifyReport {
  std::string model;
  std::vector<VerifyEntry> entries;
  bool all_pass = true;
};

inline VerifyReport verify(const std::string& name) {
  NamedModel model = build(name);
  VerifyReport report{model.name, {}, true};
  for (const auto& oracle : model.oracles) {
    auto [pass, actual] = oracle.check();
    report.entries.push_back({oracle.quantity, oracle.expected, actual, oracle.source, pass});
    report.all_pass = report.all_pass && pass;
  }
  return report;
}

}  // namespace zoo
}  // namespace stochastik
