#include "udr/ball.hpp"

#include "udr/error.hpp"

namespace udr {

namespace {

constexpr unsigned kRadiusBits = 30;

} // namespace

Ball::Ball(const Dyadic& center, const Dyadic& radius) : center_(center), radius_(radius)
{
    require(radius.sign() >= 0, "Ball: negative radius");
}

Ball Ball::from_rational(const Rational& x, long g)
{
    if (is_dyadic(x)) {
        const auto k = dyadic_exponent(x);
        return Ball(Dyadic(x.get_num(), -static_cast<long>(k)));
    }
    // x lies in [lo, lo + 2^-(g+2)); recentre on that cell.
    const Dyadic lo = Dyadic::floor_at(x, g + 2);
    const Dyadic half = Dyadic(1, -(g + 3));
    return Ball(lo + half, half);
}

Ball Ball::from_interval(const Rational& lo, const Rational& hi, long g)
{
    require(lo <= hi, "Ball::from_interval: lo > hi");
    const Dyadic a = Dyadic::floor_at(lo, g);
    const Dyadic b = Dyadic::ceil_at(hi, g);
    const Dyadic c = (a + b).mul_pow2(-1);
    return Ball(c, (b - a).mul_pow2(-1));
}

Ball Ball::hull(const Ball& a, const Ball& b)
{
    const Dyadic lo = min(a.lower(), b.lower());
    const Dyadic hi = max(a.upper(), b.upper());
    return Ball((lo + hi).mul_pow2(-1), (hi - lo).mul_pow2(-1));
}

bool Ball::contains(const Rational& x) const
{
    return lower() <= x && upper() >= x;
}

bool Ball::contains(const Dyadic& x) const
{
    return lower() <= x && x <= upper();
}

bool Ball::contains(const Ball& other) const
{
    return lower() <= other.lower() && other.upper() <= upper();
}

bool Ball::intersects(const Ball& other) const
{
    return !(upper() < other.lower() || other.upper() < lower());
}

bool Ball::radius_at_most(long g) const
{
    return radius_ <= Dyadic(1, -g);
}

Ball Ball::trim(long g) const
{
    Dyadic c = center_.floor_at(g);
    Dyadic r = radius_ + (center_ - c);
    return Ball(c, r.round_up_magnitude(kRadiusBits));
}

Ball Ball::div(const Integer& n, long g) const
{
    require(n != 0, "Ball::div: division by zero");
    const Rational exact = center_.to_rational() / Rational(n);
    const Dyadic c = Dyadic::floor_at(exact, g);
    const Rational slack = exact - c.to_rational();
    Integer an = n < 0 ? Integer(-n) : n;
    const Rational r = radius_.to_rational() / Rational(an) + slack;
    // Radius rounded up on a grid fine enough not to dominate.
    const Dyadic rr = Dyadic::ceil_at(r, g + 2).round_up_magnitude(kRadiusBits);
    return Ball(c, rr);
}

Ball Ball::square() const
{
    const Dyadic c2 = center_ * center_;
    const Dyadic r = (center_.abs() * radius_).mul_pow2(1) + radius_ * radius_;
    return Ball(c2, r);
}

Ball operator+(const Ball& a, const Ball& b)
{
    return Ball(a.center_ + b.center_, a.radius_ + b.radius_);
}

Ball operator-(const Ball& a, const Ball& b)
{
    return Ball(a.center_ - b.center_, a.radius_ + b.radius_);
}

Ball operator*(const Ball& a, const Ball& b)
{
    const Dyadic c = a.center_ * b.center_;
    const Dyadic r = a.center_.abs() * b.radius_ + b.center_.abs() * a.radius_ + a.radius_ * b.radius_;
    return Ball(c, r);
}

std::string Ball::to_string() const
{
    return "[" + center_.to_string() + " +/- " + radius_.to_string() + "]";
}

std::optional<Ball> try_frac(const Ball& x)
{
    require(x.radius() < Dyadic(1, -1), "frac: radius must be < 1/2");
    if (x.is_exact()) {
        const Integer fl = x.center().floor();
        return Ball(x.center() - Dyadic(fl));
    }
    const Integer lo = x.lower().floor();
    const Dyadic hi = x.upper();
    // Integer inside [lower, upper] iff lower is integral or floor(upper) > floor(lower).
    if (x.lower().is_integer() || hi.floor() != lo)
        return std::nullopt;
    return Ball(x.center() - Dyadic(lo), x.radius());
}

Ball frac(const Ball& x)
{
    auto r = try_frac(x);
    if (!r)
        fail(ErrorCode::StraddlesInteger, "ball " + x.to_string() + " contains an integer");
    return *r;
}

} // namespace udr
