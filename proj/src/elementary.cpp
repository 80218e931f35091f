#include "udr/elementary.hpp"

#include "udr/error.hpp"

#include <map>
#include <mutex>

namespace udr {

namespace {

Integer shl(const Integer& a, unsigned long k)
{
    Integer r;
    mpz_mul_2exp(r.get_mpz_t(), a.get_mpz_t(), k);
    return r;
}

Integer shr_floor(const Integer& a, unsigned long k)
{
    Integer r;
    mpz_fdiv_q_2exp(r.get_mpz_t(), a.get_mpz_t(), k);
    return r;
}

Integer shr_trunc(const Integer& a, unsigned long k)
{
    Integer r;
    mpz_tdiv_q_2exp(r.get_mpz_t(), a.get_mpz_t(), k);
    return r;
}

// atan(1/m) * 2^w, truncated series; error at most 3 ulps per term plus 1.
Integer atan_inv_fixed(unsigned long m, unsigned long w)
{
    const Integer one = shl(Integer(1), w);
    const Integer m2 = Integer(m) * Integer(m);
    Integer power = one / Integer(m);
    Integer sum = power;
    for (unsigned long k = 1;; ++k) {
        power /= m2;
        if (power == 0)
            break;
        Integer term = power / Integer(2 * k + 1);
        if (k % 2 == 1)
            sum -= term;
        else
            sum += term;
    }
    return sum;
}

// floor-ish pi * 2^w with |P/2^w - pi| < 2 * 2^-w.
Integer pi_fixed(unsigned long w)
{
    static std::mutex mu;
    static std::map<unsigned long, Integer> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(w); it != cache.end())
        return it->second;
    constexpr unsigned long guard = 32;
    const unsigned long wp = w + guard;
    Integer p = 16 * atan_inv_fixed(5, wp) - 4 * atan_inv_fixed(239, wp);
    Integer r = shr_floor(p, guard);
    cache.emplace(w, r);
    return r;
}

} // namespace

Ball pi_ball(long g)
{
    require(g >= 0, "pi_ball: negative precision");
    const unsigned long w = static_cast<unsigned long>(g) + 2;
    return Ball(Dyadic(pi_fixed(w), -static_cast<long>(w)), Dyadic(1, -static_cast<long>(w) + 1));
}

ComplexBall expi2pi(const Ball& x, long g)
{
    require(g >= 0, "expi2pi: negative precision");
    const Dyadic& c = x.center();
    // j = round(4c), s = c - j/4 with |s| <= 1/8.
    const Integer j = (c.mul_pow2(2) + Dyadic(1, -1)).floor();
    const Dyadic s = c - Dyadic(j, -2);
    Integer jm = j % 4;
    if (jm < 0)
        jm += 4;
    const int quadrant = static_cast<int>(jm.get_si());

    const Dyadic lip_radius = Dyadic(7) * x.radius();

    Ball cos_part;
    Ball sin_part;
    if (s.is_zero()) {
        cos_part = Ball(Dyadic(1));
        sin_part = Ball(Dyadic(0));
    } else {
        const unsigned long w = static_cast<unsigned long>(g) + 40;
        const Integer one = shl(Integer(1), w);
        const Integer s_fixed = s.floor_at(static_cast<long>(w)).scaled_to(static_cast<long>(w));
        const Integer p_fixed = pi_fixed(w);
        const Integer theta = shr_floor(2 * p_fixed * s_fixed, w);

        Integer term = one;
        Integer cos_sum = one;
        Integer sin_sum = 0;
        unsigned long n = 1;
        for (;; ++n) {
            term = shr_trunc(term * theta, w);
            term /= Integer(n);
            if (term == 0)
                break;
            if (n % 2 == 1) {
                if ((n / 2) % 2 == 0)
                    sin_sum += term;
                else
                    sin_sum -= term;
            } else {
                if ((n / 2) % 2 == 0)
                    cos_sum += term;
                else
                    cos_sum -= term;
            }
        }
        // Per-term truncation drift 2n ulps, tail, and 8 ulps from theta.
        const Integer ulps = Integer(n) * Integer(n) + 6 * Integer(n) + 16;
        const Dyadic err(ulps, -static_cast<long>(w));
        cos_part = Ball(Dyadic(cos_sum, -static_cast<long>(w)), err);
        sin_part = Ball(Dyadic(sin_sum, -static_cast<long>(w)), err);
    }

    Ball re;
    Ball im;
    switch (quadrant) {
    case 0: re = cos_part; im = sin_part; break;
    case 1: re = -sin_part; im = cos_part; break;
    case 2: re = -cos_part; im = -sin_part; break;
    default: re = sin_part; im = -cos_part; break;
    }
    if (!lip_radius.is_zero()) {
        re = Ball(re.center(), (re.radius() + lip_radius).round_up_magnitude(30));
        im = Ball(im.center(), (im.radius() + lip_radius).round_up_magnitude(30));
    }
    return {re, im};
}

namespace {

// Enclosure of atanh(z) * 2^w for rational 0 <= z <= 1/3, as integers.
std::pair<Integer, Integer> atanh_fixed(const Rational& z, unsigned long w)
{
    const Integer z_lo = floor(z * Rational(shl(Integer(1), w)));
    const Integer z_hi = ceil(z * Rational(shl(Integer(1), w)));
    auto run = [&](const Integer& z0, bool upper) {
        Integer z2 = z0 * z0;
        if (upper)
            mpz_cdiv_q_2exp(z2.get_mpz_t(), z2.get_mpz_t(), w);
        else
            mpz_fdiv_q_2exp(z2.get_mpz_t(), z2.get_mpz_t(), w);
        Integer power = z0;
        Integer sum = 0;
        unsigned long k = 0;
        for (;; ++k) {
            Integer term;
            if (upper)
                mpz_cdiv_q_ui(term.get_mpz_t(), power.get_mpz_t(), 2 * k + 1);
            else
                mpz_fdiv_q_ui(term.get_mpz_t(), power.get_mpz_t(), 2 * k + 1);
            sum += term;
            if (power <= 1)
                break;
            power *= z2;
            if (upper)
                mpz_cdiv_q_2exp(power.get_mpz_t(), power.get_mpz_t(), w);
            else
                mpz_fdiv_q_2exp(power.get_mpz_t(), power.get_mpz_t(), w);
        }
        if (upper) {
            // Tail after the last term: at most power * z^2 / (1 - z^2) <= 2 ulps
            // since z <= 1/3 and power <= 1 ulp.
            sum += 2;
        }
        return sum;
    };
    return {run(z_lo, false), run(z_hi, true)};
}

} // namespace

std::pair<Rational, Rational> ln_bounds(const Rational& y, long bits)
{
    require(y > 0, "ln_bounds: argument must be positive");
    if (y < 1) {
        auto [lo, hi] = ln_bounds(Rational(1 / y), bits);
        return {Rational(-hi), Rational(-lo)};
    }
    const Integer fl = floor(y);
    const long m = static_cast<long>(bit_length(fl)) - 1; // 2^m <= y < 2^(m+1)
    Rational w = y / pow2(m);
    long shift = m;
    // Keep z = (w-1)/(w+1) <= 1/3 by using w in [1, 2).
    const Rational z = (w - 1) / (w + 1);

    const unsigned long wbits = static_cast<unsigned long>(bits) + 16 + bit_length(Integer(m + 1));
    const auto [l2_lo, l2_hi] = atanh_fixed(make_rational(1, 3), wbits);
    const auto [a_lo, a_hi] = atanh_fixed(z, wbits);
    const Integer lo = 2 * (Integer(shift) * l2_lo + a_lo);
    const Integer hi = 2 * (Integer(shift) * l2_hi + a_hi);
    const Rational scale = pow2(-static_cast<long>(wbits));
    return {Rational(lo) * scale, Rational(hi) * scale};
}

std::pair<Rational, Rational> sqrt_bounds(const Rational& r, long g)
{
    require(r >= 0, "sqrt_bounds: negative argument");
    const Rational scaled = r * pow2(2 * g);
    const Integer f = floor(scaled);
    Integer s;
    mpz_sqrt(s.get_mpz_t(), f.get_mpz_t());
    const Rational lo = Rational(s) * pow2(-g);
    if (s * s == f && Rational(f) == scaled)
        return {lo, lo};
    return {lo, Rational(s + 1) * pow2(-g)};
}

std::pair<Rational, Rational> ComplexBall::modulus_squared_bounds() const
{
    auto dist0 = [](const Ball& b) -> Rational {
        if (b.lower() > Dyadic(0))
            return b.lower().to_rational();
        if (b.upper() < Dyadic(0))
            return Rational(-b.upper().to_rational());
        return Rational(0);
    };
    const Rational rl = dist0(re);
    const Rational il = dist0(im);
    const Rational rh = re.mag().to_rational();
    const Rational ih = im.mag().to_rational();
    return {rl * rl + il * il, rh * rh + ih * ih};
}

std::pair<Rational, Rational> ComplexBall::modulus_bounds(long bits) const
{
    const auto [lo2, hi2] = modulus_squared_bounds();
    return {sqrt_bounds(lo2, bits).first, sqrt_bounds(hi2, bits).second};
}

} // namespace udr
