#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace snowflake {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A rational r = p/q > 1 in lowest terms.
struct Slope {
  std::int64_t p = 1;
  std::int64_t q = 1;

  Slope() = default;
  Slope(std::int64_t num, std::int64_t den);

  bool is_integer() const { return q == 1; }
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  Rational exact() const { return Rational(p, q); }
  std::string str() const;

  friend bool operator==(const Slope&, const Slope&) = default;
};

// Accepts "P", "P/Q".
Slope parse_slope(std::string_view text);

Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

double to_double(const BigInt& x);
double to_double(const Rational& x);

// Natural log of a big integer that may exceed double range.
double log_big(const BigInt& x);

// Exact p^d / q^d rounded to nearest (ties toward zero), for integer-valued sample points.
BigInt rounded_power(const Slope& r, int d);

// Largest e with n = b^e for an integer b >= 2; returns {b, e}.
std::pair<std::uint64_t, int> perfect_power(std::uint64_t n);

std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_pow(std::int64_t base, int exp);

// Division rounding toward negative infinity.
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t floor_mod(std::int64_t a, std::int64_t b);

}  // namespace snowflake
