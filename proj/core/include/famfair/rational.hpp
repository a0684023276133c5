#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace famfair {

/// Exact rational number. All utilities, shares and democratic fractions use it.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "7", "-3", "0.125" or "3/8" into a canonical rational.
/// Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

/// p/q in canonical form.
Rational ratio(const BigInt& p, const BigInt& q);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Decimal rendering rounded half-up to `digits` places.
std::string to_fixed(const Rational& q, int digits);

BigInt binomial(long n, long k);

}  // namespace famfair
