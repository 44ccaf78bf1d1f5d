#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace amcsp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// "p/q" or "p" (or a decimal such as "0.25", converted exactly).
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

// Floor and ceiling of a non-negative rational.
BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);

}  // namespace amcsp
