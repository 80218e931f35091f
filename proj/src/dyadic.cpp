#include "udr/dyadic.hpp"

#include "udr/error.hpp"

#include <algorithm>
#include <cmath>

namespace udr {

namespace {

Integer shifted_left(const Integer& m, unsigned long k)
{
    Integer r;
    mpz_mul_2exp(r.get_mpz_t(), m.get_mpz_t(), k);
    return r;
}

} // namespace

Dyadic::Dyadic(long value) : mant_(value), exp_(0)
{
    normalize();
}

Dyadic::Dyadic(const Integer& mantissa, long exponent) : mant_(mantissa), exp_(exponent)
{
    normalize();
}

void Dyadic::normalize()
{
    if (mant_ == 0) {
        exp_ = 0;
        return;
    }
    const unsigned long tz = mpz_scan1(mant_.get_mpz_t(), 0);
    if (tz > 0) {
        mpz_tdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), tz);
        exp_ += static_cast<long>(tz);
    }
}

Rational Dyadic::to_rational() const
{
    if (exp_ >= 0)
        return Rational(shifted_left(mant_, static_cast<unsigned long>(exp_)));
    return make_rational(mant_, pow2_int(static_cast<unsigned long>(-exp_)));
}

double Dyadic::to_double() const
{
    if (mant_ == 0)
        return 0.0;
    long e = 0;
    const double d = mpz_get_d_2exp(&e, mant_.get_mpz_t());
    return std::ldexp(d, static_cast<int>(std::clamp<long>(e + exp_, -100000, 100000)));
}

std::string Dyadic::to_string() const
{
    return mant_.get_str() + "*2^" + std::to_string(exp_);
}

Integer Dyadic::floor() const
{
    if (exp_ >= 0)
        return shifted_left(mant_, static_cast<unsigned long>(exp_));
    Integer r;
    mpz_fdiv_q_2exp(r.get_mpz_t(), mant_.get_mpz_t(), static_cast<unsigned long>(-exp_));
    return r;
}

Integer Dyadic::ceil() const
{
    if (exp_ >= 0)
        return shifted_left(mant_, static_cast<unsigned long>(exp_));
    Integer r;
    mpz_cdiv_q_2exp(r.get_mpz_t(), mant_.get_mpz_t(), static_cast<unsigned long>(-exp_));
    return r;
}

Dyadic Dyadic::floor_at(const Rational& x, long bits)
{
    return Dyadic(udr::floor(x * pow2(bits)), -bits);
}

Dyadic Dyadic::ceil_at(const Rational& x, long bits)
{
    return Dyadic(udr::ceil(x * pow2(bits)), -bits);
}

Dyadic Dyadic::floor_at(long bits) const
{
    if (exp_ >= -bits)
        return *this;
    return Dyadic(mul_pow2(bits).floor(), -bits);
}

Dyadic Dyadic::ceil_at(long bits) const
{
    if (exp_ >= -bits)
        return *this;
    return Dyadic(mul_pow2(bits).ceil(), -bits);
}

Dyadic Dyadic::round_up_magnitude(unsigned bits) const
{
    const std::size_t len = bit_length(mant_);
    if (len <= bits)
        return *this;
    const unsigned long drop = len - bits;
    Integer m = mant_ < 0 ? Integer(-mant_) : mant_;
    mpz_cdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), drop);
    if (mant_ < 0)
        m = -m;
    return Dyadic(m, exp_ + static_cast<long>(drop));
}

Dyadic Dyadic::mul_pow2(long k) const
{
    if (mant_ == 0)
        return *this;
    Dyadic r = *this;
    r.exp_ += k;
    return r;
}

Dyadic Dyadic::abs() const
{
    return mant_ < 0 ? -*this : *this;
}

Dyadic Dyadic::operator-() const
{
    Dyadic r = *this;
    r.mant_ = -r.mant_;
    return r;
}

Integer Dyadic::scaled_to(long bits) const
{
    const long shift = exp_ + bits;
    require(shift >= 0 || mant_ == 0, "Dyadic::scaled_to: value not representable at this scale");
    return shifted_left(mant_, static_cast<unsigned long>(std::max(shift, 0L)));
}

Dyadic operator+(const Dyadic& a, const Dyadic& b)
{
    if (a.mant_ == 0)
        return b;
    if (b.mant_ == 0)
        return a;
    const long e = std::min(a.exp_, b.exp_);
    Integer sum = shifted_left(a.mant_, static_cast<unsigned long>(a.exp_ - e))
        + shifted_left(b.mant_, static_cast<unsigned long>(b.exp_ - e));
    return Dyadic(sum, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b)
{
    return a + (-b);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b)
{
    if (a.mant_ == 0 || b.mant_ == 0)
        return Dyadic();
    Integer m = a.mant_ * b.mant_;
    return Dyadic(m, a.exp_ + b.exp_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b)
{
    const int sa = a.sign();
    const int sb = b.sign();
    if (sa != sb)
        return sa <=> sb;
    if (sa == 0)
        return std::strong_ordering::equal;
    const long e = std::min(a.exp_, b.exp_);
    const int c = cmp(shifted_left(a.mant_, static_cast<unsigned long>(a.exp_ - e)),
        shifted_left(b.mant_, static_cast<unsigned long>(b.exp_ - e)));
    return c <=> 0;
}

std::strong_ordering operator<=>(const Dyadic& a, const Rational& b)
{
    const int c = cmp(a.to_rational(), b);
    return c <=> 0;
}

bool operator==(const Dyadic& a, const Rational& b)
{
    return a.to_rational() == b;
}

Dyadic min(const Dyadic& a, const Dyadic& b)
{
    return b < a ? b : a;
}

Dyadic max(const Dyadic& a, const Dyadic& b)
{
    return a < b ? b : a;
}

} // namespace udr
