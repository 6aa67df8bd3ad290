#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace mlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Renders a rational in decimal with the given number of significant
/// digits ("%.*g" style). Deterministic for a fixed build.
std::string to_decimal(const Rational& r, int sig_digits = 12);

/// "num/den" in lowest terms (den omitted when 1).
std::string to_fraction_string(const Rational& r);

}  // namespace mlab
