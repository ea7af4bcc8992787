#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace compsemi {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact value of a binary64 number (every finite double is a dyadic rational).
Rational rational_from_double(double x);

/// Parses "3", "-2", "0.25", "1e-3" or "3/8" exactly. Throws ParseError.
Rational parse_rational(std::string_view text);

/// Nearest double.
double to_double(const Rational& q);

/// Decimal when the denominator divides a power of ten (up to 10^30),
/// otherwise "p/q".
std::string format_rational(const Rational& q);

}  // namespace compsemi
