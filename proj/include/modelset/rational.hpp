#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace modelset {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline long double to_long_double(const Rational& r) { return r.convert_to<long double>(); }

/// Largest integer <= r.
BigInt floor_rational(const Rational& r);
/// Smallest integer >= r.
BigInt ceil_rational(const Rational& r);

/// Parses "3", "-7/2" or a decimal like "0.25" into an exact rational.
std::optional<Rational> parse_rational(const std::string& text);

/// Canonical text form, "p" or "p/q".
std::string rational_to_string(const Rational& r);

}  // namespace modelset
