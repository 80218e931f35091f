#pragma once

// Shared helpers for the unit suites: seeded generators and independent
// reference computations used as test oracles.

#include "udr/ball.hpp"
#include "udr/rational.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace udr::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

    Rational rational(long num_range = 1000, long den_max = 1000)
    {
        return make_rational(integer(-num_range, num_range), integer(1, den_max));
    }

    /// Uniform-ish rational in [lo, hi).
    Rational rational_in(const Rational& lo, const Rational& hi, long den = 1 << 20)
    {
        const long k = integer(0, den - 1);
        return lo + (hi - lo) * make_rational(k, den);
    }

    Ball ball(long bits = 40)
    {
        const Rational c = rational();
        const Dyadic center = Dyadic::floor_at(c, bits);
        const Dyadic radius(Integer(integer(0, 1000)), -bits);
        return Ball(center, radius);
    }

    /// Random rational point inside a ball.
    Rational point_in(const Ball& b)
    {
        const long k = integer(0, 1 << 16);
        return b.lower().to_rational() + (b.upper() - b.lower()).to_rational() * make_rational(k, 1 << 16);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Schoolbook long division: first m binary digits of frac(x).
inline std::vector<std::uint8_t> long_division_digits(const Rational& x, std::size_t m)
{
    Integer num = x.get_num();
    const Integer den = x.get_den();
    num %= den;
    if (num < 0)
        num += den;
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < m; ++i) {
        num *= 2;
        if (num >= den) {
            out.push_back(1);
            num -= den;
        } else {
            out.push_back(0);
        }
    }
    return out;
}

} // namespace udr::testing
