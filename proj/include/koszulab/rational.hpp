#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace koszulab {

// GMP rationals are kept in canonical form (reduced, positive denominator)
// by every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

// Canonical p/q; q must be nonzero. Prefer this over the two-argument
// mpq_class constructor, which does not reduce.
Rational make_rational(long p, long q);

// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input
// or a zero denominator.
Rational parse_rational(std::string_view text);

// Serializes as "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

}  // namespace koszulab
