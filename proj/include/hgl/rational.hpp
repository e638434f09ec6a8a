#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "hgl/error.hpp"

namespace hgl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  require(den != 0, "zero denominator");
  return Rational(num, den);
}

inline BigInt ipow(const BigInt& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

inline Rational rpow(const Rational& base, unsigned exponent) {
  return Rational(ipow(boost::multiprecision::numerator(base), exponent),
                  ipow(boost::multiprecision::denominator(base), exponent));
}

// Always "p/q", also for integers ("1/1", "0/1").
inline std::string to_fraction(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

// Accepts "p/q", "p" and plain decimals such as "0.08" (converted exactly).
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] { return InputError("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  auto parse_int = [&](std::string_view digits) {
    std::size_t start = (digits.size() > 0 && (digits[0] == '-' || digits[0] == '+')) ? 1 : 0;
    if (digits.size() == start) throw bad();
    for (std::size_t i = start; i < digits.size(); ++i)
      if (digits[i] < '0' || digits[i] > '9') throw bad();
    return BigInt(std::string(digits[0] == '+' ? digits.substr(1) : digits));
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw bad();
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    bool negative = text[0] == '-';
    std::string_view whole = text.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac[0] == '-' || frac[0] == '+') throw bad();
    Rational magnitude = Rational(whole.empty() ? BigInt(0) : parse_int(whole)) +
                         Rational(parse_int(frac), ipow(BigInt(10), static_cast<unsigned>(frac.size())));
    return negative ? -magnitude : magnitude;
  }
  return Rational(parse_int(text));
}

}  // namespace hgl
