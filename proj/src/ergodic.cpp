#include "udr/ergodic.hpp"

#include "udr/error.hpp"

#include <algorithm>
#include <sstream>

namespace udr {

std::string_view to_string(OrbitMap m)
{
    return m == OrbitMap::Doubling ? "doubling" : "rotation";
}

OrbitSpec OrbitSpec::doubling(const RealOracle& x, std::uint64_t N, long g, std::uint64_t first)
{
    OrbitSpec s;
    s.map = OrbitMap::Doubling;
    s.start = x;
    s.length = N;
    s.precision = g;
    s.first_index = first;
    return s;
}

OrbitSpec OrbitSpec::rotation(const RealOracle& x, const RealOracle& a, std::uint64_t N, long g, std::uint64_t first)
{
    OrbitSpec s;
    s.map = OrbitMap::Rotation;
    s.start = x;
    s.angle = a;
    s.length = N;
    s.precision = g;
    s.first_index = first;
    return s;
}

namespace {

constexpr long guard_bits = 32;

OrbitPoint reduce(const Ball& y)
{
    OrbitPoint p;
    if (auto f = try_frac(y)) {
        p.ball = *f;
        return p;
    }
    // Straddles the integer nearest to the center.
    const Integer k = (y.center() + Dyadic(Integer(1), -1)).floor();
    p.ball = y - Ball(Dyadic(k));
    p.boundary = true;
    return p;
}

} // namespace

Orbit doubling_orbit(const OrbitSpec& spec)
{
    require(spec.map == OrbitMap::Doubling, "not a doubling orbit");
    require(spec.precision >= 1, "precision must be positive");
    Orbit out;
    out.reserve(spec.length);
    if (spec.length == 0)
        return out;

    if (auto q = spec.start.exact_rational()) {
        Rational y = frac_exact(Rational(*q * pow2(static_cast<long>(spec.first_index))));
        for (std::uint64_t i = 0; i < spec.length; ++i) {
            OrbitPoint p;
            p.exact = y;
            p.ball = Ball::from_rational(y, spec.precision);
            out.push_back(std::move(p));
            y = frac_exact(Rational(2 * y));
        }
        return out;
    }

    const long last = static_cast<long>(spec.first_index + spec.length - 1);
    const long needed = last + spec.precision;
    long P = needed + guard_bits;
    if (auto avail = spec.start.max_precision()) {
        if (*avail < needed)
            fail(ErrorCode::DigitFileExhausted, "doubling orbit needs " + std::to_string(needed) + " bits, "
                    + spec.start.describe() + " has " + std::to_string(*avail));
        P = std::min(P, *avail);
    }
    // One query, then exact shifts: the radius grows by one bit per step.
    const Ball x = spec.start.query(P);
    for (std::uint64_t i = 0; i < spec.length; ++i) {
        const Ball y = x.mul_pow2(static_cast<long>(spec.first_index + i));
        out.push_back(reduce(y));
    }
    return out;
}

Orbit rotation_orbit(const OrbitSpec& spec)
{
    require(spec.map == OrbitMap::Rotation, "not a rotation orbit");
    require(spec.angle.has_value(), "rotation needs an angle");
    require(spec.precision >= 1, "precision must be positive");
    const RealOracle& a = *spec.angle;
    const auto rational = a.is_rational();
    if (rational.value_or(false))
        fail(ErrorCode::RationalRotation, "angle " + a.describe() + " is rational");
    if (!rational.has_value() && !spec.declared_irrational)
        fail(ErrorCode::RationalRotation, "irrationality of " + a.describe() + " is not declared");

    Orbit out;
    out.reserve(spec.length);
    if (spec.length == 0)
        return out;
    const std::uint64_t last = spec.first_index + spec.length - 1;
    const long g = spec.precision + 2;
    const long ga = g + static_cast<long>(bit_length(Integer(static_cast<unsigned long>(last)))) + 1;
    const Ball x = spec.start.query(g + 1);
    const Ball ab = a.query(ga);
    for (std::uint64_t n = spec.first_index; n <= last; ++n) {
        const Ball y = (x + ab * Ball(Dyadic(Integer(static_cast<unsigned long>(n))))).trim(spec.precision + 1);
        out.push_back(reduce(y));
    }
    return out;
}

Orbit generate_orbit(const OrbitSpec& spec)
{
    return spec.map == OrbitMap::Doubling ? doubling_orbit(spec) : rotation_orbit(spec);
}

std::optional<Integer> g_bit_prefix(const Ball& y, long g)
{
    const Integer lo = y.lower().mul_pow2(g).floor();
    const Integer hi = y.upper().mul_pow2(g).floor();
    if (lo != hi || lo < 0 || lo >= pow2_int(static_cast<unsigned long>(g)))
        return std::nullopt;
    // An upper endpoint exactly on the next cell edge is still outside it.
    if (y.upper().mul_pow2(g) == Dyadic(lo + 1))
        return std::nullopt;
    return lo;
}

std::optional<Integer> g_bit_prefix(const OrbitPoint& p, long g)
{
    if (p.exact)
        return leading_digits_exact(*p.exact, static_cast<std::size_t>(g));
    if (p.boundary)
        return std::nullopt;
    return g_bit_prefix(p.ball, g);
}

Rational FrequencyPoint::frequency_min() const
{
    return make_rational(Integer(static_cast<unsigned long>(hits_min)), Integer(static_cast<unsigned long>(N)));
}

Rational FrequencyPoint::frequency_max() const
{
    return make_rational(Integer(static_cast<unsigned long>(hits_max)), Integer(static_cast<unsigned long>(N)));
}

std::vector<FrequencyPoint> birkhoff_frequency(const Orbit& orbit, const QIntervalSet& A,
    const std::vector<std::uint64_t>& prefixes)
{
    require(A.is_subset_of(QIntervalSet::unit()), "target must lie in [0,1)");
    std::vector<std::uint64_t> sorted = prefixes;
    std::sort(sorted.begin(), sorted.end());
    for (auto N : sorted)
        require(N >= 1 && N <= orbit.size(), "prefix length out of range");

    std::vector<std::uint64_t> sure(orbit.size() + 1, 0), maybe(orbit.size() + 1, 0);
    const std::uint64_t need = sorted.empty() ? 0 : sorted.back();
    for (std::uint64_t i = 0; i < need; ++i) {
        const auto& p = orbit[i];
        Membership m;
        if (p.exact)
            m = A.contains(*p.exact) ? Membership::In : Membership::Out;
        else if (p.boundary)
            m = Membership::Boundary;
        else
            m = A.contains(p.ball);
        sure[i + 1] = sure[i] + (m == Membership::In);
        maybe[i + 1] = maybe[i] + (m != Membership::Out);
    }
    std::vector<FrequencyPoint> out;
    for (auto N : prefixes)
        out.push_back({N, sure[N], maybe[N]});
    return out;
}

std::string orbit_csv(const Orbit& orbit, std::uint64_t first_index, int digits)
{
    std::ostringstream os;
    os << "step,center,radius_exponent,boundary\n";
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        const auto& p = orbit[i];
        os << first_index + i << ',' << to_decimal(p.ball.center().to_rational(), digits) << ',';
        const Dyadic& r = p.ball.radius();
        if (r.is_zero())
            os << "exact";
        else
            os << r.exponent() + static_cast<long>(bit_length(r.mantissa()));
        os << ',' << (p.boundary ? 1 : 0) << '\n';
    }
    return os.str();
}

} // namespace udr
