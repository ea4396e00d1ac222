#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "gencoll/error.hpp"

namespace gencoll {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw DomainError("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

// Largest integer not exceeding r (cpp_int division truncates toward zero).
inline BigInt floor_of(const Rational& r) {
  const BigInt n = numerator_of(r);
  const BigInt d = denominator_of(r);
  BigInt q = n / d;
  if (n < 0 && q * d != n) --q;
  return q;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Always "p/q", including integers ("3/1") so consumers can split unconditionally.
inline std::string to_string(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

namespace detail {

inline BigInt parse_digits(std::string_view s) {
  if (s.empty()) throw ParseError(0, "expected digits");
  BigInt v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError(0, "invalid character '" + std::string(1, c) + "' in number");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace detail

// Accepts "7", "-7", "3/8", "-3/8", "0.125", "-.5". Decimals are converted exactly.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError(0, "empty number");
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_digits(s.substr(0, slash));
    BigInt den = detail::parse_digits(s.substr(slash + 1));
    if (den == 0) throw ParseError(0, "zero denominator in '" + std::string(text) + "'");
    value = Rational(num, den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw ParseError(0, "invalid number '" + std::string(text) + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt w = whole.empty() ? BigInt(0) : detail::parse_digits(whole);
    BigInt f = frac.empty() ? BigInt(0) : detail::parse_digits(frac);
    value = Rational(w * scale + f, scale);
  } else {
    value = Rational(detail::parse_digits(s));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace gencoll
