#pragma once

#include "udr/dyadic.hpp"

#include <optional>
#include <string>

namespace udr {

/// Closed interval [center - radius, center + radius] with dyadic endpoints.
///
/// Arithmetic is exact on centers and accumulates radii, so every result
/// encloses the exact result for all operands drawn from the input balls.
/// Mantissas grow under multiplication; callers bound them with trim(g),
/// which only ever widens the ball.
class Ball {
public:
    Ball() = default;
    Ball(const Dyadic& center, const Dyadic& radius = Dyadic());
    Ball(long value) : Ball(Dyadic(value)) {}

    /// Enclosure of a rational with radius at most 2^-g (exact when dyadic).
    static Ball from_rational(const Rational& x, long g);
    /// Smallest convenient ball covering [lo, hi], endpoints rounded outward
    /// on the 2^-g grid.
    static Ball from_interval(const Rational& lo, const Rational& hi, long g);
    static Ball hull(const Ball& a, const Ball& b);

    const Dyadic& center() const { return center_; }
    const Dyadic& radius() const { return radius_; }
    Dyadic lower() const { return center_ - radius_; }
    Dyadic upper() const { return center_ + radius_; }
    bool is_exact() const { return radius_.is_zero(); }

    /// Largest |t| over t in the ball.
    Dyadic mag() const { return center_.abs() + radius_; }

    bool contains(const Rational& x) const;
    bool contains(const Dyadic& x) const;
    bool contains(const Ball& other) const;
    bool intersects(const Ball& other) const;

    /// radius <= 2^-g
    bool radius_at_most(long g) const;

    /// Round the center onto the 2^-g grid and the radius up to a short
    /// mantissa; the result contains *this.
    Ball trim(long g) const;

    Ball mul_pow2(long k) const { return Ball(center_.mul_pow2(k), radius_.mul_pow2(k)); }
    /// Enclosure of t / n for every t in the ball, with rounding slack 2^-g.
    Ball div(const Integer& n, long g) const;
    Ball square() const;

    Ball operator-() const { return Ball(-center_, radius_); }
    friend Ball operator+(const Ball& a, const Ball& b);
    friend Ball operator-(const Ball& a, const Ball& b);
    friend Ball operator*(const Ball& a, const Ball& b);
    Ball& operator+=(const Ball& o) { return *this = *this + o; }
    Ball& operator-=(const Ball& o) { return *this = *this - o; }
    Ball& operator*=(const Ball& o) { return *this = *this * o; }

    /// Structural equality (same center and radius).
    friend bool operator==(const Ball& a, const Ball& b) = default;

    std::string to_string() const;

private:
    Dyadic center_;
    Dyadic radius_;
};

/// Fractional part of every point of x, or nullopt when [lo, hi] contains an
/// integer and the ball has positive radius. Requires radius < 1/2.
std::optional<Ball> try_frac(const Ball& x);
/// As try_frac, but throws STRADDLES_INTEGER.
Ball frac(const Ball& x);

} // namespace udr
