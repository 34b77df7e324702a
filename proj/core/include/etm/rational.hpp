#pragma once

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace etm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact value of the double (every finite double is a dyadic rational).
Rational rational_from_double(double x);

double to_double(const Rational& q);

BigInt floor_rational(const Rational& q);
BigInt ceil_rational(const Rational& q);

// Exact square root, or nullopt when q is not the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& q);

// "3/4" style for non-integers, plain integer string otherwise.
std::string to_fraction_string(const Rational& q);

// Accepts "7", "-3/4" (exact text) and decimal/scientific literals such as
// "0.5" or "1e-3" (taken as the exact value of the parsed double).
struct ParsedScalar {
  Rational value;
  bool exact_text = false;  // true when written as an integer or a fraction
};
std::optional<ParsedScalar> parse_scalar(const std::string& text);

// Natural log of a positive big integer, usable far beyond double range.
double log_big(const BigInt& x);

}  // namespace etm
