#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace sbic {

using Rational = mpq_class;

// Canonical "p/q" form; integers print without a denominator.
std::string to_string(const Rational& q);

// Accepts "p/q", integers, plain decimals ("0.125") and scientific notation
// ("1.5e-3"). Decimal input is converted exactly, never through a double.
Rational parse_rational(std::string_view text);

// Exact conversion of a finite double.
Rational from_double(double x);

// p/q in lowest terms.
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

}  // namespace sbic
