#pragma once

#include <gmpxx.h>

#include <string>

namespace specineq {

/// Arbitrary-precision rational; GMP keeps it canonical (reduced, positive denominator).
using Rational = mpq_class;
using BigInt = mpz_class;

/// p/q in canonical form. mpq_class(p, q) leaves the fraction unreduced, which breaks ==.
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// C(a, b) with the convention C(a, b) = 0 when a < b or either argument is negative.
BigInt binomial(long a, long b);

BigInt factorial(long n);

inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

/// Parses "p/q", "p" or a plain decimal such as "0.25"; throws std::invalid_argument.
Rational parse_rational(const std::string& text);

}  // namespace specineq
