#pragma once
// Exact rational scalars for the lattice algebra. boost::rational handles
// normalization; we add floor/ceil and the centered modulo used by the
// shaping lattice, whose fundamental cell is the half-open cube
// (-beta/2, beta/2]^n.

#include <boost/rational.hpp>

#include <stdexcept>

namespace ccf {

using Rational = boost::rational<long long>;

inline long long floor_rat(const Rational& x) {
  long long q = x.numerator() / x.denominator();
  if (x.numerator() % x.denominator() != 0 && x.numerator() < 0) --q;
  return q;
}

inline long long ceil_rat(const Rational& x) { return -floor_rat(-x); }

// reduce x into (-period/2, period/2]
inline Rational mod_centered(const Rational& x, const Rational& period) {
  if (period <= Rational(0)) throw std::invalid_argument("mod_centered: period must be positive");
  long long q = ceil_rat(x / period - Rational(1, 2));
  return x - period * Rational(q);
}

// exact square root if the rational is a perfect square, else throws
inline Rational sqrt_exact(const Rational& x) {
  if (x < Rational(0)) throw std::domain_error("sqrt_exact: negative");
  auto isqrt = [](long long v) -> long long {
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
  };
  long long sn = isqrt(x.numerator()), sd = isqrt(x.denominator());
  if (sn * sn != x.numerator() || sd * sd != x.denominator())
    throw std::domain_error("sqrt_exact: not a perfect rational square");
  return Rational(sn, sd);
}

inline double to_double(const Rational& x) { return boost::rational_cast<double>(x); }

}  // namespace ccf
