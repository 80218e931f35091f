#pragma once

// Certified elementary functions on balls and rationals. Everything here
// is computed in fixed-point integer arithmetic with explicit error
// accounting; no floating-point enters a certified result.

#include "udr/ball.hpp"
#include "udr/complex_ball.hpp"

#include <utility>

namespace udr {

/// Ball around pi with radius <= 2^-g.
Ball pi_ball(long g);

/// e(x) = exp(2 pi i x) for every x in the ball.
///
/// Reduces x to s + j/4 with |s| <= 1/8, sums the sine/cosine Taylor series
/// for 2 pi s in fixed point, and rotates by i^j. The radius of each
/// component is at most 2^-g plus 7 * x.radius() (e is 2 pi-Lipschitz).
/// Exact when x is exact and 4x is an integer.
ComplexBall expi2pi(const Ball& x, long g);

/// Rational enclosure [lo, hi] of ln(y), y > 0, with hi - lo <= 2^-bits.
std::pair<Rational, Rational> ln_bounds(const Rational& y, long bits = 64);
inline Rational ln_upper(const Rational& y, long bits = 64)
{
    return ln_bounds(y, bits).second;
}
inline Rational ln_lower(const Rational& y, long bits = 64)
{
    return ln_bounds(y, bits).first;
}

/// [lo, hi] containing sqrt(r), r >= 0, with hi - lo <= 2^-g (lo == hi when
/// the square root is exact at that scale).
std::pair<Rational, Rational> sqrt_bounds(const Rational& r, long g);

} // namespace udr
