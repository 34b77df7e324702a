#include "etm/rational.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace etm {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("rational_from_double: value is not finite");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double m = std::frexp(x, &exp);  // x = m * 2^exp with |m| in [1/2, 1)
  const auto mant = static_cast<std::int64_t>(std::llround(std::ldexp(m, 53)));
  exp -= 53;
  Rational r(mant);
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << -exp);
  }
  return r;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

BigInt floor_rational(const Rational& q) {
  const BigInt num = numerator(q);
  const BigInt den = denominator(q);  // > 0 by normalization
  BigInt t = num / den;
  if (num < 0 && t * den != num) --t;
  return t;
}

BigInt ceil_rational(const Rational& q) { return -floor_rational(-q); }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  if (q == 0) return Rational(0);
  const BigInt num = numerator(q);
  const BigInt den = denominator(q);
  const BigInt sn = boost::multiprecision::sqrt(num);
  const BigInt sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

std::string to_fraction_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << '/' << denominator(q);
  return os.str();
}

namespace {

bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

std::optional<ParsedScalar> parse_scalar(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den)) return std::nullopt;
    const BigInt d{den};
    if (d == 0) return std::nullopt;
    return ParsedScalar{Rational(BigInt(num), d), true};
  }
  if (is_integer_literal(text)) {
    return ParsedScalar{Rational(BigInt(text)), true};
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == nullptr || *end != '\0' || !std::isfinite(v)) return std::nullopt;
  return ParsedScalar{rational_from_double(v), false};
}

double log_big(const BigInt& x) {
  if (x <= 0) throw std::domain_error("log_big: argument must be positive");
  const auto bits = boost::multiprecision::msb(x);
  if (bits <= 960) return std::log(x.convert_to<double>());
  const unsigned shift = bits - 52;
  const double top = (x >> shift).convert_to<double>();
  return std::log(top) + static_cast<double>(shift) * std::log(2.0);
}

}  // namespace etm
