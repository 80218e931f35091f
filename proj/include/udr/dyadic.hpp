#pragma once

#include "udr/rational.hpp"

#include <compare>
#include <string>

namespace udr {

/// mantissa * 2^exponent, kept canonical (odd mantissa, or zero with
/// exponent 0) so that equality is structural.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long value);
    Dyadic(const Integer& mantissa, long exponent = 0);

    const Integer& mantissa() const { return mant_; }
    long exponent() const { return exp_; }

    bool is_zero() const { return mant_ == 0; }
    int sign() const { return sgn(mant_); }
    bool is_integer() const { return exp_ >= 0 || mant_ == 0; }

    Rational to_rational() const;
    double to_double() const;
    std::string to_string() const; // "m*2^e"

    Integer floor() const;
    Integer ceil() const;

    /// Largest multiple of 2^-bits not exceeding x (resp. smallest not below).
    static Dyadic floor_at(const Rational& x, long bits);
    static Dyadic ceil_at(const Rational& x, long bits);
    Dyadic floor_at(long bits) const;
    Dyadic ceil_at(long bits) const;

    /// Round |x| up to at most `bits` significant bits, keeping the sign.
    Dyadic round_up_magnitude(unsigned bits) const;

    Dyadic mul_pow2(long k) const;
    Dyadic abs() const;
    Dyadic operator-() const;

    /// Integer m with x = m * 2^-bits, exact; requires exponent >= -bits.
    Integer scaled_to(long bits) const;

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
    Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
    Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

    friend bool operator==(const Dyadic& a, const Dyadic& b)
    {
        return a.exp_ == b.exp_ && a.mant_ == b.mant_;
    }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

    friend std::strong_ordering operator<=>(const Dyadic& a, const Rational& b);
    friend bool operator==(const Dyadic& a, const Rational& b);

private:
    void normalize();

    Integer mant_ = 0;
    long exp_ = 0;
};

Dyadic min(const Dyadic& a, const Dyadic& b);
Dyadic max(const Dyadic& a, const Dyadic& b);

} // namespace udr
