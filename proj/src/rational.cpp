#include "mlab/rational.hpp"

#include <cstdio>

namespace mlab {

std::string to_decimal(const Rational& r, int sig_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig_digits, r.convert_to<double>());
  return buf;
}

std::string to_fraction_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

}  // namespace mlab
