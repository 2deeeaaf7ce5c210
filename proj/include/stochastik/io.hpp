#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chain.hpp"
#include "jump.hpp"
#include "matrix.hpp"

namespace stochastik {
namespace io {

using nlohmann::json;

// Exact mode accepts integers and quoted literals ("a/b" or a decimal string).
// Bare non-integer numbers are rejected there: a binary double would silently
// change the row sums.
inline Rational json_to_rational(const json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long long>());
  if (value.is_number_float())
    throw Error(ErrorCode::BadInput,
                "exact backend needs rationals as strings (\"a/b\" or \"0.25\"); "
                "got a bare float");
  throw Error(ErrorCode::BadInput, "expected a number or rational string");
}

inline double json_to_double(const json& value) {
  if (value.is_string()) return to_double(parse_rational(value.get<std::string>()));
  if (value.is_number()) return value.get<double>();
  throw Error(ErrorCode::BadInput, "expected a number or rational string");
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadInput, "cannot open '" + path + "'");
  json parsed;
  try {
    in >> parsed;
  } catch (const json::parse_error& err) {
    throw Error(ErrorCode::BadInput, "invalid JSON in '" + path + "': " + err.what());
  }
  return parsed;
}

template <typename T>
struct ChainFile {
  StochasticMatrix<T> chain;
  std::optional<Distribution<T>> initial;
};

// Chain spec document: {"states": [...], "rows": [[...]], "initial": [...]}.
template <typename T>
ChainFile<T> parse_chain_file(const json& doc) {
  if (!doc.contains("rows") || !doc["rows"].is_array())
    throw Error(ErrorCode::BadInput, "chain file needs a \"rows\" array");
  const auto& rows = doc["rows"];
  const std::size_t n = rows.size();
  Matrix<T> m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n)
      throw Error(ErrorCode::BadInput, "row " + std::to_string(i) + " is not length " +
                                           std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) {
      if constexpr (scalar_traits<T>::exact)
        m(i, j) = json_to_rational(rows[i][j]);
      else
        m(i, j) = json_to_double(rows[i][j]);
    }
  }
  std::vector<std::string> labels;
  if (doc.contains("states")) {
    for (const auto& s : doc["states"]) labels.push_back(s.get<std::string>());
  }
  ChainFile<T> out{StochasticMatrix<T>(std::move(m), std::move(labels)), std::nullopt};
  if (doc.contains("initial")) {
    std::vector<T> init;
    for (const auto& v : doc["initial"]) {
      if constexpr (scalar_traits<T>::exact)
        init.push_back(json_to_rational(v));
      else
        init.push_back(json_to_double(v));
    }
    out.initial = Distribution<T>(std::move(init));
  }
  return out;
}

// Generator spec document: {"states": [...], "rates": {"i->j": value}}.
// Endpoints are state names when "states" is present, indices otherwise.
template <typename T>
jump::Generator<T> parse_generator_file(const json& doc) {
  if (!doc.contains("rates") || !doc["rates"].is_object())
    throw Error(ErrorCode::BadInput, "generator file needs a \"rates\" object");
  std::vector<std::string> labels;
  if (doc.contains("states"))
    for (const auto& s : doc["states"]) labels.push_back(s.get<std::string>());

  auto state_index = [&](const std::string& token) -> std::size_t {
    if (!labels.empty()) {
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == token) return i;
      throw Error(ErrorCode::BadInput, "unknown state '" + token + "'");
    }
    return static_cast<std::size_t>(std::stoul(token));
  };

  std::size_t n = labels.size();
  std::vector<std::tuple<std::size_t, std::size_t, T>> entries;
  for (const auto& [key, value] : doc["rates"].items()) {
    auto arrow = key.find("->");
    if (arrow == std::string::npos)
      throw Error(ErrorCode::BadInput, "rate key '" + key + "' is not \"i->j\"");
    std::size_t from = state_index(key.substr(0, arrow));
    std::size_t to = state_index(key.substr(arrow + 2));
    T rate;
    if constexpr (scalar_traits<T>::exact)
      rate = json_to_rational(value);
    else
      rate = json_to_double(value);
    entries.emplace_back(from, to, rate);
    n = std::max(n, std::max(from, to) + 1);
  }

  Matrix<T> m(n, n, T(0));
  for (auto& [from, to, rate] : entries) {
    if (from == to) throw Error(ErrorCode::BadInput, "diagonal rates are implied, not given");
    m(from, to) = rate;
    m(from, from) -= rate;
  }
  return jump::Generator<T>(std::move(m), std::move(labels));
}

struct TspInput {
  Matrix<double> distances;
};

// TSP input: {"coords": [[x, y], ...]} or {"matrix": [[...]]}.
inline TspInput parse_tsp_file(const json& doc) {
  if (doc.contains("coords")) {
    const auto& coords = doc["coords"];
    const std::size_t n = coords.size();
    std::vector<std::pair<double, double>> pts;
    for (const auto& c : coords) {
      if (!c.is_array() || c.size() != 2)
        throw Error(ErrorCode::BadInput, "each coordinate must be [x, y]");
      pts.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
    Matrix<double> d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d(i, j) = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
    return {std::move(d)};
  }
  if (doc.contains("matrix")) {
    const auto& rows = doc["matrix"];
    const std::size_t n = rows.size();
    Matrix<double> d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) throw Error(ErrorCode::BadInput, "distance matrix must be square");
      for (std::size_t j = 0; j < n; ++j) d(i, j) = rows[i][j].get<double>();
    }
    return {std::move(d)};
  }
  throw Error(ErrorCode::BadInput, "tour input needs \"coords\" or \"matrix\"");
}

// Fixed-format decimal rendering so repeated runs emit identical bytes.
inline std::string format_double(double x, int precision = 12) {
  std::ostringstream oss;
  oss.precision(precision);
  oss << x;
  return oss.str();
}

template <typename T>
std::string format_scalar(const T& x) {
  if constexpr (scalar_traits<T>::exact)
    return format_rational(x) + " (= " + format_double(to_double(x)) + ")";
  else
    return format_double(x);
}

}  // namespace io
}  // namespace stochastik
