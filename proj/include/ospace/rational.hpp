#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "ospace/error.hpp"

namespace ospace {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Canonical text form: "p" for integers, otherwise "p/q" in lowest terms.
inline std::string to_string(const Rational& q) {
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {
inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}
}  // namespace detail

/// Parses "p", "p/q", "-p/q" or a plain decimal such as "0.125" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto p = s.substr(0, slash), q = s.substr(slash + 1);
    if (!detail::all_digits(p) || !detail::all_digits(q))
      throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
    Integer den{std::string(q)};
    if (den == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
    value = Rational(Integer{std::string(p)}, den);
  } else {
    auto dot = s.find('.');
    auto whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() && frac.empty())
      throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
    if ((!whole.empty() && !detail::all_digits(whole)) ||
        (dot != std::string_view::npos && !detail::all_digits(frac)))
      throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
    Integer num = whole.empty() ? Integer(0) : Integer(std::string(whole));
    Integer den = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    value = Rational(num, den);
  }
  return negative ? Rational(-value) : value;
}

/// Simplest rational (smallest denominator, then smallest numerator) in the
/// closed interval [lo, hi]; requires 0 <= lo <= hi.
inline Rational simplest_between(Rational lo, Rational hi) {
  // Continued-fraction descent on the Stern-Brocot tree.
  Integer fl = boost::multiprecision::numerator(lo) / boost::multiprecision::denominator(lo);
  if (Rational(fl) == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  Rational rlo = lo - Rational(fl), rhi = hi - Rational(fl);
  // rlo in (0,1), rhi in (rlo, 1): reciprocal flips the interval.
  Rational inner = simplest_between(Rational(1) / rhi, Rational(1) / rlo);
  return Rational(fl) + Rational(1) / inner;
}

}  // namespace ospace
