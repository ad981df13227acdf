#include "snowflake/numeric.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "snowflake/error.hpp"

namespace snowflake {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidMatrix: return "InvalidMatrix";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::ZeroMatrix: return "ZeroMatrix";
    case Errc::LambdaNotGreaterThanOne: return "LambdaNotGreaterThanOne";
    case Errc::RowSumViolation: return "RowSumViolation";
    case Errc::DomainError: return "DomainError";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NonRepresentable: return "NonRepresentable";
    case Errc::InvalidArity: return "InvalidArity";
    case Errc::RationalRNotAllowed: return "RationalRNotAllowed";
    case Errc::UnknownGenerator: return "UnknownGenerator";
    case Errc::NotACPower: return "NotACPower";
    case Errc::NotEqual: return "NotEqual";
    case Errc::SlopeTooSmall: return "SlopeTooSmall";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::NonPositiveIndex: return "NonPositiveIndex";
    case Errc::IllFormed: return "IllFormed";
    case Errc::Overflow: return "Overflow";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

Slope::Slope(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num <= 0) {
    throw Error(Errc::DomainError, "slope must be a positive rational; got " +
                                       std::to_string(num) + "/" + std::to_string(den));
  }
  std::int64_t g = std::gcd(num, den);
  p = num / g;
  q = den / g;
}

std::string Slope::str() const {
  return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q);
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(Errc::DomainError, "expected integer or P/Q; got '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Slope parse_slope(std::string_view text) {
  Rational r = parse_rational(text);
  if (r <= 0) {
    throw Error(Errc::DomainError, "slope must be positive; got " + std::string(text));
  }
  return Slope(static_cast<std::int64_t>(boost::multiprecision::numerator(r)),
               static_cast<std::int64_t>(boost::multiprecision::denominator(r)));
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text, text));
  std::int64_t num = parse_int(text.substr(0, slash), text);
  std::int64_t den = parse_int(text.substr(slash + 1), text);
  if (den == 0) throw Error(Errc::DomainError, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

double to_double(const BigInt& x) { return x.convert_to<double>(); }

double to_double(const Rational& x) { return x.convert_to<double>(); }

double log_big(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  unsigned bits = boost::multiprecision::msb(x);
  if (bits < 900) return std::log(x.convert_to<double>());
  unsigned shift = bits - 60;
  BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

BigInt rounded_power(const Slope& r, int d) {
  BigInt num = boost::multiprecision::pow(BigInt(r.p), static_cast<unsigned>(d));
  BigInt den = boost::multiprecision::pow(BigInt(r.q), static_cast<unsigned>(d));
  BigInt quot = num / den;
  BigInt rem = num - quot * den;
  if (2 * rem > den) ++quot;
  return quot;
}

std::pair<std::uint64_t, int> perfect_power(std::uint64_t n) {
  if (n < 4) return {n, 1};
  for (int e = 63; e >= 2; --e) {
    auto b = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<long double>(n), 1.0L / e)));
    for (std::uint64_t cand = (b > 2 ? b - 1 : 2); cand <= b + 1; ++cand) {
      BigInt acc = boost::multiprecision::pow(BigInt(cand), static_cast<unsigned>(e));
      if (acc == n) {
        auto inner = perfect_power(cand);
        return {inner.first, inner.second * e};
      }
    }
  }
  return {n, 1};
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(Errc::Overflow, "integer overflow in " + std::to_string(a) + " * " + std::to_string(b));
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(Errc::Overflow, "integer overflow in " + std::to_string(a) + " + " + std::to_string(b));
  }
  return out;
}

std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t acc = 1;
  for (int i = 0; i < exp; ++i) acc = checked_mul(acc, base);
  return acc;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

}  // namespace snowflake
