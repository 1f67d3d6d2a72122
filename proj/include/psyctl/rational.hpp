#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace psyctl {

// Rates and metrics are kept as exact rationals internally; rounding happens
// only at serialization. Percent values are stored as percent units, i.e.
// R(E) for 137 of 204 points is Rational(13700, 204).
using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Nearest integer, half away from zero.
long long round_nearest(const Rational& r);

// Fixed-point decimal string with `decimals` fractional digits, half away
// from zero. format_fixed(Rational(175, 2), 2) == "87.50".
std::string format_fixed(const Rational& r, int decimals);

}  // namespace psyctl
