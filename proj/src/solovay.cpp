#include "udr/solovay.hpp"

#include "udr/elementary.hpp"
#include "udr/error.hpp"
#include "udr/weyl.hpp"

#include <algorithm>

namespace udr {

std::string_view to_string(ThetaMode m)
{
    return m == ThetaMode::Lipschitz ? "lipschitz" : "sampled";
}

SolovaySpec::SolovaySpec(FunctionFamily f, Rational K_, Integer h_, Rational eps_)
    : family(std::move(f)), K(std::move(K_)), h(std::move(h_)), eps(std::move(eps_))
{
    require(K > 0, "K must be positive");
    require(h != 0, "h must be nonzero");
    require(eps > 0 && eps <= 2, "eps must lie in (0, 2]");
}

Rational SolovaySpec::alpha() const
{
    const Rational hK = Rational(abs(h)) * K;
    return Rational(8 / (eps * eps) * (1 + 17 / hK));
}

namespace {

constexpr long precision_cap = 4096;
// Prime, so the doubling orbit of a sample does not collapse to 0.
const Integer sample_denominator(1000000007UL);

std::uint64_t grid_n(std::uint64_t k)
{
    require(k >= 1 && k < (1UL << 31), "k out of range");
    return k * k;
}

void require_length(const FunctionFamily& f, std::uint64_t N)
{
    if (auto len = f.length())
        require(N <= *len, "family has only " + std::to_string(*len) + " functions, need " + std::to_string(N));
}

std::pair<Rational, Rational> modulus_enclosure(const Sequence& seq, const Integer& h, std::uint64_t N,
    const Rational& width)
{
    require(width > 0, "width must be positive");
    long g = 8;
    while (pow2(-g + 4) > width)
        ++g;
    for (; g <= precision_cap; g += 16) {
        const ComplexBall s = weyl_sum(seq, h, N, g);
        auto [lo, hi] = s.modulus_bounds(g + 4);
        if (lo < 0)
            lo = 0;
        if (hi - lo <= width)
            return {lo, hi};
    }
    fail(ErrorCode::PrecisionUnreachable, "modulus enclosure did not reach the requested width");
}

Rational pi_upper()
{
    return pi_ball(64).upper().to_rational();
}

} // namespace

std::pair<Rational, Rational> weyl_modulus(const SolovaySpec& spec, std::uint64_t N, const Rational& t,
    const Rational& width)
{
    require_length(spec.family, N);
    return modulus_enclosure(family_sequence(spec.family, RealOracle::rational(t)), spec.h, N, width);
}

ThetaBound theta_bound(const SolovaySpec& spec, std::uint64_t k)
{
    const std::uint64_t N = grid_n(k);
    require_length(spec.family, N);
    const Rational absh(abs(spec.h));
    const Rational Nq(Integer(static_cast<unsigned long>(N)));
    Rational theta;
    if (spec.theta_mode == ThetaMode::Lipschitz) {
        Rational sum = 0;
        for (std::uint64_t n = 1; n <= N; ++n)
            sum += spec.family.deriv_sup(n);
        theta = 2 * pi_upper() * absh * sum / Nq;
    } else {
        // Grid maximum of |S(u'(t))| plus the Lipschitz pad of t -> S(u'(t)).
        constexpr long G = 64;
        Rational curvature = 0;
        for (std::uint64_t n = 1; n <= N; ++n)
            curvature += spec.family.deriv2_bound(n);
        const Rational pad = 2 * pi_upper() * absh * curvature / Nq / (2 * G);
        Rational best = 0;
        for (long j = 0; j < G; ++j) {
            const Rational t = make_rational(2 * j + 1, 2 * G);
            const FunctionFamily f = spec.family;
            const Sequence deriv = [f, t](std::uint64_t n, long g) { return f.deriv(n, Ball::from_rational(t, g + 8), g); };
            best = std::max(best, modulus_enclosure(deriv, spec.h, N, pow2(-20)).second);
        }
        theta = std::min(Rational(1), Rational(best + pad));
    }
    return {theta, ceil(theta) + 1};
}

long choose_a(const Rational& eps, const Integer& p)
{
    require(eps > 0 && p >= 1, "choose_a needs eps > 0 and p >= 1");
    const Rational target = eps / (8 * Rational(p));
    long a = 0;
    while (pow2(-a) >= target)
        ++a;
    return a;
}

Rational grid_sample(const SolovaySpec& spec, std::uint64_t k, long a, const Integer& i)
{
    const Rational t = Rational(i) * pow2(-a);
    const auto [lo, hi] = weyl_modulus(spec, grid_n(k), t, spec.eps / 8);
    const Rational mid = (lo + hi) / 2;
    const Integer r = floor(Rational(mid * pow2(a + 8) + Rational(1, 2)));
    return Rational(r) * pow2(-(a + 8));
}

std::vector<Rational> grid_samples(const SolovaySpec& spec, std::uint64_t k, long a)
{
    if (a > spec.grid_cap_bits)
        fail(ErrorCode::GridTooLarge, "grid 2^" + std::to_string(a) + " + 1 exceeds 2^" + std::to_string(spec.grid_cap_bits)
                + " + 1 points at k = " + std::to_string(k));
    const std::uint64_t count = (1UL << a) + 1;
    std::vector<Rational> q;
    q.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i)
        q.push_back(grid_sample(spec, k, a, Integer(static_cast<unsigned long>(i))));
    return q;
}

BkSet build_Bk(const SolovaySpec& spec, std::uint64_t k)
{
    BkSet b;
    b.k = k;
    const auto tb = theta_bound(spec, k);
    b.theta = tb.theta;
    b.p = tb.p;
    b.a = choose_a(spec.eps, b.p);
    b.q = grid_samples(spec, k, b.a);
    const Rational threshold = 3 * spec.eps / 4;
    const Rational w = pow2(-b.a);
    std::vector<QInterval> pieces;
    for (std::uint64_t i = 0; i < b.q.size(); ++i) {
        if (b.q[i] <= threshold)
            continue;
        b.X.push_back(i);
        const Rational c(Integer(static_cast<unsigned long>(i)));
        const Rational lo = std::max(Rational(0), Rational((c - 1) * w));
        const Rational hi = std::min(Rational(1), Rational((c + 1) * w));
        pieces.emplace_back(lo, hi);
    }
    b.intervals = QIntervalSet(pieces);
    return b;
}

LazyBk::LazyBk(const SolovaySpec& spec, std::uint64_t k) : spec_(spec), k_(k)
{
    const auto tb = theta_bound(spec, k);
    theta_ = tb.theta;
    p_ = tb.p;
    a_ = choose_a(spec.eps, p_);
}

Rational LazyBk::sample(const Integer& i)
{
    auto it = cache_.find(i);
    if (it != cache_.end())
        return it->second;
    const Rational q = grid_sample(spec_, k_, a_, i);
    cache_.emplace(i, q);
    return q;
}

bool LazyBk::contains(const Rational& t)
{
    if (t < 0 || t > 1)
        return false;
    const Rational s = t * pow2(a_);
    const Integer top = pow2_int(static_cast<unsigned long>(a_));
    const Rational threshold = 3 * spec_.eps / 4;
    std::vector<Integer> candidates = {floor(s)};
    if (Rational(floor(s)) != s)
        candidates.push_back(ceil(s));
    for (const auto& i : candidates)
        if (i >= 0 && i <= top && sample(i) > threshold)
            return true;
    return false;
}

InclusionReport inclusion_check(const SolovaySpec& spec, std::uint64_t k, std::uint64_t samples, std::uint64_t seed)
{
    InclusionReport r;
    r.k = k;
    r.samples = samples;
    LazyBk B(spec, k);
    CounterRng rng(seed, k);
    const Rational half = spec.eps / 2;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Integer m = rng.bits(64) % (sample_denominator + 1);
        const Rational t = make_rational(m, sample_denominator);
        const auto [lo, hi] = weyl_modulus(spec, grid_n(k), t, spec.eps / 64);
        const bool in = B.contains(t);
        r.in_Bk += in;
        if (lo > spec.eps) {
            ++r.above_eps;
            r.lower_violations += !in;
        }
        if (in && hi < half)
            ++r.upper_violations;
        if ((!in && lo <= spec.eps && hi > spec.eps) || (in && lo < half && hi >= half))
            ++r.undecided;
    }
    return r;
}

Rational measure_bound(const SolovaySpec& spec, std::uint64_t k)
{
    require(k >= 2, "measure bound needs k >= 2");
    const Rational kq(Integer(static_cast<unsigned long>(k)));
    return Rational(spec.alpha() * ln_upper(kq) / (kq * kq));
}

MeasureCheck check_measure(const SolovaySpec& spec, std::uint64_t k)
{
    MeasureCheck c;
    c.k = k;
    c.bound = measure_bound(spec, k);
    try {
        c.measure = build_Bk(spec, k).intervals.measure();
        c.measure_upper = *c.measure;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::GridTooLarge)
            throw;
        c.measure_upper = 1;
    }
    c.holds = c.measure_upper <= c.bound;
    if (c.measure && !c.holds)
        fail(ErrorCode::BoundViolated, "measure(B_" + std::to_string(k) + ") = " + to_string(*c.measure)
                + " exceeds " + to_string(c.bound));
    return c;
}

Rational tail_sum_bound(const SolovaySpec& spec, std::uint64_t L)
{
    require(L >= 3, "tail bound needs L >= 3");
    const Rational Lq(Integer(static_cast<unsigned long>(L)));
    return Rational(spec.alpha() * (ln_upper(Lq) + 1) / Lq);
}

Rational summed_term_bounds(const SolovaySpec& spec, std::uint64_t L, std::uint64_t count)
{
    const Rational alpha = spec.alpha();
    Rational sum = 0;
    for (std::uint64_t k = L + 1; k <= L + count; ++k) {
        const Rational kq(Integer(static_cast<unsigned long>(k)));
        // Rounded up to a common dyadic grid to keep denominators small.
        sum += Dyadic::ceil_at(Rational(alpha * ln_upper(kq) / (kq * kq)), 96).to_rational();
    }
    return sum;
}

std::uint64_t choose_L(const SolovaySpec& spec, const Rational& delta)
{
    require(delta > 0, "delta must be positive");
    std::uint64_t hi = 3;
    while (tail_sum_bound(spec, hi) > delta)
        hi *= 2;
    if (hi == 3)
        return 3;
    std::uint64_t lo = hi / 2; // tail(lo) > delta
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (tail_sum_bound(spec, mid) > delta ? lo : hi) = mid;
    }
    return hi;
}

TotalMeasure total_measure(const SolovaySpec& spec, const Rational& delta)
{
    TotalMeasure t;
    t.L = choose_L(spec, delta);
    t.error = tail_sum_bound(spec, t.L);
    t.sum = 0;
    for (std::uint64_t k = 2; k <= t.L; ++k)
        t.sum += build_Bk(spec, k).intervals.measure();
    return t;
}

HScan scan_h(const FunctionFamily& f, const Rational& x, long H, std::uint64_t k_max)
{
    require(H >= 1 && k_max >= 2, "scan needs H >= 1 and k_max >= 2");
    HScan best;
    best.lower = -1;
    const Sequence seq = family_sequence(f, RealOracle::rational(x));
    for (long h = -H; h <= H; ++h) {
        if (h == 0)
            continue;
        for (std::uint64_t k = 2; k <= k_max; ++k) {
            const std::uint64_t N = k * k;
            if (auto len = f.length(); len && N > *len)
                break;
            const Rational lo = modulus_enclosure(seq, h, N, pow2(-20)).first;
            if (lo > best.lower) {
                best = {Integer(h), lo, k};
            }
        }
    }
    return best;
}

} // namespace udr
