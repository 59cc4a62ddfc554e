#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace latmaj {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

/// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// Binomial coefficient with C(x, j) = 0 for x < j or j < 0.
BigInt binom(std::int64_t x, std::int64_t j);

BigInt ipow(std::int64_t base, std::int64_t exponent);

}  // namespace latmaj
