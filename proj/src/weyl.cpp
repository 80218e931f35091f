#include "udr/weyl.hpp"

#include "udr/elementary.hpp"
#include "udr/error.hpp"

#include <algorithm>
#include <cmath>

namespace udr {

namespace {

long h_bits(const Integer& h)
{
    return static_cast<long>(bit_length(h));
}

Integer as_integer(std::uint64_t n)
{
    return Integer(static_cast<unsigned long>(n));
}

// e(h x_n) with radius well below 2^-g.
ComplexBall weyl_term(const Sequence& seq, const Integer& h, std::uint64_t n, long g)
{
    Ball x;
    try {
        x = seq(n, g + 6 + h_bits(h));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DigitFileExhausted || e.code() == ErrorCode::PrecisionUnreachable)
            fail(ErrorCode::PrecisionUnreachable, "term " + std::to_string(n) + ": " + e.what());
        throw;
    }
    return expi2pi(Ball(Dyadic(h)) * x, g + 4).trim(g + 6);
}

ComplexBall average(const ComplexBall& sum, std::uint64_t N, long g)
{
    const ComplexBall s = sum.div(as_integer(N), g + 4);
    if (!s.re.radius_at_most(g) || !s.im.radius_at_most(g))
        fail(ErrorCode::PrecisionUnreachable, "Weyl sum radius exceeds 2^-" + std::to_string(g));
    return s;
}

} // namespace

ComplexBall weyl_sum(const Sequence& seq, const Integer& h, std::uint64_t N, long g)
{
    require(h != 0, "weyl_sum: h must be nonzero");
    require(N >= 1, "weyl_sum: N must be at least 1");
    ComplexBall sum;
    for (std::uint64_t n = 1; n <= N; ++n)
        sum += weyl_term(seq, h, n, g);
    return average(sum, N, g);
}

const ComplexBall& WeylSeries::at(std::uint64_t N) const
{
    const auto it = std::lower_bound(schedule.begin(), schedule.end(), N);
    require(it != schedule.end() && *it == N, "WeylSeries: N not in the schedule");
    return values[static_cast<std::size_t>(it - schedule.begin())];
}

WeylSeries weyl_series(const Sequence& seq, const Integer& h, std::vector<std::uint64_t> schedule, long g)
{
    require(h != 0, "weyl_series: h must be nonzero");
    std::sort(schedule.begin(), schedule.end());
    schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
    require(schedule.empty() || schedule.front() >= 1, "weyl_series: N must be at least 1");
    WeylSeries out;
    out.h = h;
    out.schedule = schedule;
    ComplexBall sum;
    std::uint64_t n = 0;
    for (const auto N : schedule) {
        while (n < N)
            sum += weyl_term(seq, h, ++n, g);
        out.values.push_back(average(sum, N, g));
    }
    return out;
}

WeylSeries weyl_series_full(const Sequence& seq, const Integer& h, std::uint64_t N_max, long g)
{
    std::vector<std::uint64_t> all(N_max);
    for (std::uint64_t i = 0; i < N_max; ++i)
        all[i] = i + 1;
    return weyl_series(seq, h, std::move(all), g);
}

std::vector<std::uint64_t> subsequence_schedule(std::uint64_t k_max)
{
    require(k_max >= 1, "subsequence_schedule: k_max must be at least 1");
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = 1; k <= k_max; ++k)
        out.push_back(k * k);
    return out;
}

GapReport gap_bound_check(const WeylSeries& series, const std::vector<std::uint64_t>& schedule)
{
    GapReport r;
    bool first = true;
    auto has = [&](std::uint64_t N) { return std::binary_search(series.schedule.begin(), series.schedule.end(), N); };
    for (std::size_t k = 0; k + 1 < schedule.size(); ++k) {
        const std::uint64_t Mk = schedule[k];
        const std::uint64_t Mk1 = schedule[k + 1];
        require(Mk < Mk1, "gap_bound_check: schedule must be strictly increasing");
        bool covered = true;
        for (std::uint64_t N = Mk; N < Mk1 && covered; ++N)
            covered = has(N);
        if (!covered)
            continue;
        ++r.blocks;
        const Rational bound = make_rational(2 * as_integer(Mk1 - Mk), as_integer(Mk1));
        const ComplexBall& base = series.at(Mk);
        for (std::uint64_t N = Mk; N < Mk1; ++N) {
            const auto [lo, hi] = (series.at(N) - base).modulus_bounds(64);
            ++r.checks;
            if (lo > bound)
                r.violations.push_back(N);
            const Rational slack = bound - hi;
            if (first || slack < r.min_slack) {
                r.min_slack = slack;
                first = false;
            }
        }
    }
    return r;
}

Rational TargetCount::deviation(std::uint64_t N) const
{
    const Rational a = abs(Rational(frequency_min(N) - measure));
    const Rational b = abs(Rational(frequency_max(N) - measure));
    return std::max(a, b);
}

std::optional<Ball> frac_term(const Sequence& seq, std::uint64_t n, long g, long cap)
{
    for (long gg = g; gg <= cap; gg *= 2) {
        Ball b;
        try {
            b = seq(n, gg);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::DigitFileExhausted || e.code() == ErrorCode::PrecisionUnreachable)
                return std::nullopt;
            throw;
        }
        if (auto f = try_frac(b))
            return f;
    }
    return std::nullopt;
}

namespace {

// Membership of frac(y) for a ball y around an integer k: the values fill
// [0, y_hi - k] and [1 + y_lo - k, 1).
Membership straddle_membership(const QIntervalSet& target, const Ball& y)
{
    const Integer k = (y.center() + Dyadic(1, -1)).floor();
    const Rational r_hi = (y.upper() - Dyadic(k)).to_rational();
    const Rational r_lo = (y.lower() - Dyadic(k)).to_rational();
    const Rational slack = y.radius().to_rational();
    QIntervalSet near;
    if (r_hi >= 0)
        near = near | QIntervalSet{QInterval(0, Rational(r_hi + slack))};
    if (r_lo < 0)
        near = near | QIntervalSet{QInterval(Rational(1 + r_lo), 1)};
    near = near.clip(0, 1);
    if (near.is_subset_of(target))
        return Membership::In;
    if ((near & target).empty())
        return Membership::Out;
    return Membership::Boundary;
}

} // namespace

UDReport empirical_ud(
    const Sequence& seq, const std::vector<QIntervalSet>& targets, std::uint64_t N, const CountOptions& opts)
{
    require(N >= 1, "empirical_ud: N must be at least 1");
    UDReport report;
    report.N = N;
    for (const auto& t : targets) {
        require(t.is_subset_of(QIntervalSet::unit()), "empirical_ud: targets must lie in [0, 1)");
        report.targets.push_back(TargetCount{t, 0, 0, t.measure()});
    }
    std::vector<Ball> points;
    std::vector<Membership> state(targets.size());
    for (std::uint64_t n = 1; n <= N; ++n) {
        std::fill(state.begin(), state.end(), Membership::Boundary);
        std::optional<Ball> last;
        for (long g = opts.initial_precision; g <= opts.precision_cap; g *= 2) {
            const auto f = frac_term(seq, n, g, opts.precision_cap);
            if (!f)
                break;
            last = f;
            bool open = false;
            for (std::size_t i = 0; i < targets.size(); ++i) {
                if (state[i] == Membership::Boundary)
                    state[i] = targets[i].contains(*f);
                open = open || state[i] == Membership::Boundary;
            }
            if (!open)
                break;
        }
        if (!last) {
            // x_n sits on an integer as far as refinement can tell: test both
            // sides of it.
            std::optional<Ball> b;
            try {
                b = seq(n, opts.precision_cap);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::DigitFileExhausted && e.code() != ErrorCode::PrecisionUnreachable)
                    throw;
            }
            if (b && b->radius() < Dyadic(1, -2))
                for (std::size_t i = 0; i < targets.size(); ++i)
                    state[i] = straddle_membership(targets[i], *b);
        }
        for (std::size_t i = 0; i < targets.size(); ++i) {
            if (state[i] == Membership::In) {
                ++report.targets[i].hits_min;
                ++report.targets[i].hits_max;
            } else if (state[i] == Membership::Boundary) {
                ++report.targets[i].hits_max;
            }
        }
        if (opts.with_discrepancy)
            points.push_back(last ? *last : Ball(Dyadic(1, -1), Dyadic(1, -1)));
    }
    if (opts.with_discrepancy)
        report.star_discrepancy = star_discrepancy(points);
    return report;
}

Rational star_discrepancy(std::vector<Rational> points)
{
    require(!points.empty(), "star_discrepancy: no points");
    std::sort(points.begin(), points.end());
    const Integer N = as_integer(points.size());
    Rational d = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        require(points[i] >= 0 && points[i] < 1, "star_discrepancy: points must lie in [0, 1)");
        const Rational above = make_rational(as_integer(i + 1), N) - points[i];
        const Rational below = points[i] - make_rational(as_integer(i), N);
        d = std::max({d, above, below});
    }
    return d;
}

std::pair<Rational, Rational> star_discrepancy(const std::vector<Ball>& points)
{
    std::vector<Rational> centers;
    Rational r = 0;
    for (const auto& p : points) {
        centers.push_back(p.center().to_rational());
        r = std::max(r, p.radius().to_rational());
    }
    const Rational d = star_discrepancy(std::move(centers));
    return {std::max(Rational(0), Rational(d - r)), d + r};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(splitmix64(seed ^ splitmix64(stream ^ 0x6a09e667f3bcc909ULL)))
{
}

std::uint64_t CounterRng::next()
{
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Integer CounterRng::bits(unsigned long count)
{
    Integer v = 0;
    unsigned long have = 0;
    while (have < count) {
        v = (v << 64) + Integer(static_cast<unsigned long>(next()));
        have += 64;
    }
    return v >> (have - count);
}

Rational tight_metric_bound(const Integer& h, const Rational& K, std::uint64_t N)
{
    require(N >= 3, "metric bound needs N >= 3");
    require(h != 0 && K > 0, "metric bound needs h != 0 and K > 0");
    const Rational hk = abs(Rational(h)) * K;
    const Rational n(as_integer(N));
    return 1 / n + 8 / hk * ln_upper(3 * n) / n;
}

Rational relaxed_metric_bound(const Integer& h, const Rational& K, std::uint64_t N)
{
    require(N >= 3, "metric bound needs N >= 3");
    require(h != 0 && K > 0, "metric bound needs h != 0 and K > 0");
    const Rational hk = abs(Rational(h)) * K;
    const Rational n(as_integer(N));
    return (1 + 17 / hk) * ln_upper(n) / n;
}

Rational chebyshev_tail(const Rational& eps, const Integer& h, const Rational& K, std::uint64_t N)
{
    require(eps > 0, "chebyshev_tail: eps must be positive");
    return relaxed_metric_bound(h, K, N) / (eps * eps);
}

namespace {

// Fractional part in double of m * X / 2^B, exact up to the final rounding.
double frac_of_product(const Integer& m, const Integer& X, unsigned long B)
{
    Integer p = m * X;
    mpz_fdiv_r_2exp(p.get_mpz_t(), p.get_mpz_t(), B);
    if (B > 60) {
        mpz_fdiv_q_2exp(p.get_mpz_t(), p.get_mpz_t(), B - 60);
        return std::ldexp(p.get_d(), -60);
    }
    return std::ldexp(p.get_d(), -static_cast<int>(B));
}

} // namespace

MetricReport metric_bound_mc(const FunctionFamily& f, const Rational& K, const Integer& h, std::uint64_t N,
    std::uint64_t samples, std::uint64_t seed, std::uint64_t chunk)
{
    require(N >= 3, "metric_bound_mc: N must be at least 3");
    require(samples >= 2, "metric_bound_mc: need at least two samples");
    require(chunk >= 1, "metric_bound_mc: chunk must be positive");
    MetricReport r;
    r.N = N;
    r.h = h;
    r.K = K;
    r.samples = samples;
    r.seed = seed;
    r.tight_bound = tight_metric_bound(h, K, N);
    r.relaxed_bound = relaxed_metric_bound(h, K, N);
    r.koksma_certified = f.is_builtin() && koksma_check(f, K, N).verdict == KoksmaVerdict::Certified;

    // Enough random bits that h u_n(x) keeps 64 bits below the binary point.
    Rational lmax = 0;
    for (std::uint64_t n = 1; n <= N; ++n)
        lmax = std::max(lmax, f.deriv_sup(n));
    const unsigned long B = 64 + bit_length(ceil(lmax * abs(Rational(h))) + 1);

    // Integer multipliers make h u_n(x) exact for dyadic x.
    std::vector<Integer> mult;
    if (const auto* lin = std::get_if<FunctionFamily::Linear>(&f.kind())) {
        for (std::uint64_t n = 1; n <= N; ++n)
            mult.push_back(h * lin->a.at(n));
    } else if (const auto* geo = std::get_if<FunctionFamily::Geometric>(&f.kind()); geo && geo->t.get_den() == 1) {
        Integer tn = 1;
        for (std::uint64_t n = 1; n <= N; ++n) {
            tn *= geo->t.get_num();
            mult.push_back(h * tn);
        }
    }

    const double two_pi = 2 * M_PI;
    double mean = 0, m2 = 0;
    std::uint64_t count = 0;
    const std::uint64_t chunks = (samples + chunk - 1) / chunk;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        CounterRng rng(seed, c);
        const std::uint64_t todo = std::min(chunk, samples - c * chunk);
        for (std::uint64_t i = 0; i < todo; ++i) {
            const Integer X = rng.bits(B);
            double cs = 0, sn = 0;
            if (!mult.empty()) {
                for (const auto& m : mult) {
                    const double a = two_pi * frac_of_product(m, X, B);
                    cs += std::cos(a);
                    sn += std::sin(a);
                }
            } else {
                const RealOracle x = RealOracle::rational(Rational(X) * pow2(-static_cast<long>(B)));
                for (std::uint64_t n = 1; n <= N; ++n) {
                    const Ball y = f.term(n, x, 64 + h_bits(h)) * Ball(Dyadic(h));
                    const double a = two_pi * to_double(frac_exact(y.center().to_rational()));
                    cs += std::cos(a);
                    sn += std::sin(a);
                }
            }
            const double v = (cs * cs + sn * sn) / (static_cast<double>(N) * static_cast<double>(N));
            ++count;
            const double delta = v - mean;
            mean += delta / static_cast<double>(count);
            m2 += delta * (v - mean);
        }
    }
    r.estimate = mean;
    r.std_error = std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
    r.pass = r.estimate - 3 * r.std_error < to_double(r.tight_bound);
    return r;
}

} // namespace udr
