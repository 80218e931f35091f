#pragma once

// Arbitrary-precision integers and rationals (GMP), plus the handful of
// exact helpers every other module leans on.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace udr {

using Integer = mpz_class;
/// Always canonical: denominator > 0 and gcd(num, den) = 1.
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);
inline Rational make_rational(long num, long den = 1)
{
    return make_rational(Integer(num), Integer(den));
}

Integer floor(const Rational& x);
Integer ceil(const Rational& x);
Rational abs(const Rational& x);

/// x - floor(x), exact; always in [0, 1).
Rational frac_exact(const Rational& x);

/// 2^e as an exact rational (e may be negative).
Rational pow2(long e);
Integer pow2_int(unsigned long e);
Rational pow(const Rational& base, unsigned long e);

/// Number of bits of |n| (0 for n = 0).
std::size_t bit_length(const Integer& n);

/// True iff the reduced denominator is a power of two.
bool is_dyadic(const Rational& x);

/// Least k >= 0 with x * 2^k an integer; x must be dyadic.
unsigned long dyadic_exponent(const Rational& x);

/// "p/q" with an explicit denominator, e.g. "5/1", "-1/3".
std::string to_string(const Rational& x);

/// Decimal rendering truncated to `digits` fractional digits (advisory only).
std::string to_decimal(const Rational& x, int digits = 20);
double to_double(const Rational& x);

/// Accepts "p/q", "p", and plain decimals such as "-0.125".
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

} // namespace udr
