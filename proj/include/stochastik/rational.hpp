#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdlib>
#include <string>

#include "errors.hpp"

namespace stochastik {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

// Signed decimal-digit integer; explicit digit loop, so a leading zero can
// never flip the base the way big-integer string constructors do.
inline BigInt parse_bigint(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  if (pos == text.size()) throw Error(ErrorCode::BadInput, "empty integer literal");
  BigInt value = 0;
  for (; pos < text.size(); ++pos) {
    if (text[pos] < '0' || text[pos] > '9')
      throw Error(ErrorCode::BadInput, "bad digit in integer literal '" + text + "'");
    value = value * 10 + (text[pos] - '0');
  }
  return negative ? BigInt(-value) : value;
}

// Parses "a/b", integer, or plain decimal strings ("0.25") into an exact value.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::BadInput, "empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num = parse_bigint(text.substr(0, slash));
    BigInt den = parse_bigint(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::BadInput, "zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_bigint(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  BigInt den = 1;
  for (std::size_t i = 0; i < text.size() - dot - 1; ++i) den *= 10;
  return Rational(parse_bigint(digits), den);
}

inline std::string format_rational(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

// Per-scalar policy: exactness flag, comparison tolerance, conversions.
template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational tolerance() { return 0; }
  static bool near(const Rational& a, const Rational& b) { return a == b; }
  static Rational from_rational(const Rational& r) { return r; }
  static Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double tolerance() { return 1e-12; }
  static bool near(double a, double b) { return std::fabs(a - b) <= 1e-12; }
  static double from_rational(const Rational& r) { return to_double(r); }
  static double abs(double x) { return std::fabs(x); }
};

inline BigInt binomial_coefficient(long n, long k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (long i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;
  }
  return result;
}

inline BigInt factorial(long n) {
  BigInt result = 1;
  for (long i = 2; i <= n; ++i) result *= i;
  return result;
}

inline BigInt integer_pow(BigInt base, long exp) {
  BigInt result = 1;
  while (exp > 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

}  // namespace stochastik
