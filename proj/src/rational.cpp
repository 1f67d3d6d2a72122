#include "psyctl/rational.hpp"

#include <cstdlib>

namespace psyctl {

namespace {

// Rounds num/den (den > 0) to the nearest integer, half away from zero.
long long divide_rounded(long long num, long long den) {
  const long long quot = num / den;
  const long long rem = num % den;
  if (rem == 0) return quot;
  if (2 * std::llabs(rem) >= den) return quot + (num < 0 ? -1 : 1);
  return quot;
}

}  // namespace

long long round_nearest(const Rational& r) {
  return divide_rounded(r.numerator(), r.denominator());
}

std::string format_fixed(const Rational& r, int decimals) {
  long long scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const long long scaled = divide_rounded(r.numerator() * scale, r.denominator());
  const bool negative = scaled < 0;
  const long long magnitude = std::llabs(scaled);
  std::string digits = std::to_string(magnitude);
  if (decimals == 0) return (negative ? "-" : "") + digits;
  if (digits.size() <= static_cast<std::size_t>(decimals)) {
    digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
  return (negative ? "-" : "") + digits;
}

}  // namespace psyctl
