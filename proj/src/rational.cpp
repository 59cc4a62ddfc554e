#include "latmaj/rational.hpp"

namespace latmaj {

std::string to_string(const Rational& r) {
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

BigInt binom(std::int64_t x, std::int64_t j) {
  if (j < 0 || x < j) return 0;
  if (j > x - j) j = x - j;
  BigInt result = 1;
  for (std::int64_t w = 1; w <= j; ++w) {
    result *= x - j + w;
    result /= w;
  }
  return result;
}

BigInt ipow(std::int64_t base, std::int64_t exponent) {
  BigInt result = 1;
  for (std::int64_t e = 0; e < exponent; ++e) result *= base;
  return result;
}

}  // namespace latmaj
