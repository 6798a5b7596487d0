#pragma once

#include <gmpxx.h>

#include <string>

namespace cspstream {

// Exact rational arithmetic for instance values and LP solving.
// Estimators downstream work in binary64; conversions happen at the boundary.
using Rational = mpq_class;

// Renders "p/q", or just "p" when the denominator is 1.
inline std::string to_frac_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace cspstream
