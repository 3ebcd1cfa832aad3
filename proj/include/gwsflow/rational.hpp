#pragma once

// Exact rational arithmetic used by the classification predicates.
//
// Every decision the library advertises as "exact" (parameter validation,
// sign of the discriminant, theta vs. its cap, the integer X/Y comparisons)
// reduces to the sign of a rational expression.  This header fixes the
// rational type and provides the few conversions the rest of the code needs.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gws {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Sign of a rational: -1, 0, or +1.
inline int sgn(const Rational& r) { return r.sign(); }

/// Nearest binary64 value.
inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact rational value of a binary64 number (every finite double is rational).
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("rational_from_double: value is not finite");
  return Rational(x);  // boost converts binary64 exactly
}

/// "p/q" with integer p, q.  Falls back to plain integers ("3") and decimal
/// literals ("0.25" == 1/4).  Whitespace around tokens is accepted.
inline Rational rational_from_string(std::string_view s) {
  auto fail = [&] { throw std::invalid_argument("cannot parse rational from '" + std::string(s) + "'"); };

  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) fail();

  auto parse_int = [&](std::string_view v) -> BigInt {
    if (v.empty()) fail();
    std::size_t i = (v[0] == '+' || v[0] == '-') ? 1 : 0;
    if (i == v.size()) fail();
    for (std::size_t j = i; j < v.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(v[j]))) fail();
    return BigInt(std::string(v));
  };

  if (auto slash = t.find('/'); slash != std::string::npos) {
    BigInt num = parse_int(std::string_view(t).substr(0, slash));
    BigInt den = parse_int(std::string_view(t).substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
  }
  if (auto dot = t.find('.'); dot != std::string::npos) {
    std::string_view head = std::string_view(t).substr(0, dot);
    std::string_view frac = std::string_view(t).substr(dot + 1);
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) fail();
    BigInt num = head.empty() || head == "+" || head == "-" ? BigInt(0) : parse_int(head);
    bool neg = !head.empty() && head[0] == '-';
    BigInt den = 1;
    for (char c : frac) {
      num = num * 10 + (neg ? -(c - '0') : (c - '0'));
      den *= 10;
    }
    return Rational(num, den);
  }
  return Rational(parse_int(t));
}

/// "p/q" (or "p" when the denominator is 1).
inline std::string to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

}  // namespace gws
