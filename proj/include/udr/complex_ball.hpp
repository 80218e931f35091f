#pragma once

#include "udr/ball.hpp"

#include <utility>

namespace udr {

/// Rectangular complex enclosure: re and im are independent balls.
struct ComplexBall {
    Ball re;
    Ball im;

    ComplexBall() = default;
    ComplexBall(Ball r, Ball i = Ball()) : re(std::move(r)), im(std::move(i)) {}

    friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b)
    {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b)
    {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    ComplexBall& operator+=(const ComplexBall& o) { return *this = *this + o; }

    ComplexBall div(const Integer& n, long g) const { return {re.div(n, g), im.div(n, g)}; }
    ComplexBall trim(long g) const { return {re.trim(g), im.trim(g)}; }

    /// Largest of the two component radii.
    Dyadic radius() const { return max(re.radius(), im.radius()); }

    /// Certified lower and upper bounds on |z| over the enclosure, on the
    /// 2^-bits grid (lower rounded down, upper rounded up).
    std::pair<Rational, Rational> modulus_bounds(long bits) const;
    /// Bounds on |z|^2, exact.
    std::pair<Rational, Rational> modulus_squared_bounds() const;

    friend bool operator==(const ComplexBall&, const ComplexBall&) = default;
};

} // namespace udr
