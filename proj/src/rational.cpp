#include "compsemi/rational.hpp"

#include <cctype>
#include <cmath>

#include "compsemi/errors.hpp"

namespace compsemi {

namespace {

BigInt pow10(int k) {
  BigInt p = 1;
  for (int i = 0; i < k; ++i) p *= 10;
  return p;
}

// Unsigned decimal with optional fraction and exponent; no sign.
Rational parse_decimal(std::string_view t, std::size_t offset) {
  std::size_t i = 0;
  BigInt mantissa = 0;
  int scale = 0;
  bool digits = false;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
    mantissa = mantissa * 10 + (t[i] - '0');
    digits = true;
    ++i;
  }
  if (i < t.size() && t[i] == '.') {
    ++i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
      mantissa = mantissa * 10 + (t[i] - '0');
      ++scale;
      digits = true;
      ++i;
    }
  }
  if (!digits) throw ParseError("expected a number", offset + i);
  int exponent = 0;
  if (i < t.size() && (t[i] == 'e' || t[i] == 'E')) {
    ++i;
    int sign = 1;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) sign = t[i++] == '-' ? -1 : 1;
    if (i == t.size() || !std::isdigit(static_cast<unsigned char>(t[i])))
      throw ParseError("malformed exponent", offset + i);
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
      exponent = exponent * 10 + (t[i] - '0');
      if (exponent > 400) throw ParseError("exponent out of range", offset + i);
      ++i;
    }
    exponent *= sign;
  }
  if (i != t.size()) throw ParseError("unexpected character", offset + i);
  const int net = exponent - scale;
  if (net >= 0) return Rational(mantissa * pow10(net));
  return Rational(mantissa, pow10(-net));
}

}  // namespace

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("rational_from_double: non-finite value");
  int exp = 0;
  const double frac = std::frexp(x, &exp);
  // frac * 2^53 is an integer for every double.
  const auto m = static_cast<long long>(std::ldexp(frac, 53));
  exp -= 53;
  const Rational r{BigInt(m)};
  if (exp >= 0) return r * Rational(BigInt(1) << exp);
  return r / Rational(BigInt(1) << -exp);
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw ParseError("expected a number", 0);
  std::size_t start = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    start = 1;
  }
  const auto slash = text.find('/');
  Rational value;
  if (slash == std::string_view::npos) {
    value = parse_decimal(text.substr(start), start);
  } else {
    const Rational num = parse_decimal(text.substr(start, slash - start), start);
    const Rational den = parse_decimal(text.substr(slash + 1), slash + 1);
    if (den == 0) throw ParseError("zero denominator", slash + 1);
    value = num / den;
  }
  return negative ? Rational(-value) : value;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string format_rational(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  BigInt p = 1;
  for (int k = 1; k <= 30; ++k) {
    p *= 10;
    if (p % den == 0) {
      const BigInt scaled = boost::multiprecision::abs(num) * (p / den);
      std::string digits = scaled.str();
      if (digits.size() <= static_cast<std::size_t>(k)) digits.insert(0, k + 1 - digits.size(), '0');
      digits.insert(digits.size() - k, ".");
      while (digits.back() == '0') digits.pop_back();
      return (num < 0 ? "-" : "") + digits;
    }
  }
  return num.str() + "/" + den.str();
}

}  // namespace compsemi
