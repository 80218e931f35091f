#pragma once

#include "udr/complex_ball.hpp"
#include "udr/families.hpp"
#include "udr/interval_set.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace udr {

/// (1/N) sum_{j<=N} e(h x_j) with radius <= 2^-g.
/// PRECISION_UNREACHABLE when the sequence cannot be refined far enough.
ComplexBall weyl_sum(const Sequence& seq, const Integer& h, std::uint64_t N, long g);

struct WeylSeries {
    Integer h;
    std::vector<std::uint64_t> schedule;
    std::vector<ComplexBall> values;

    /// S_N for a scheduled N.
    const ComplexBall& at(std::uint64_t N) const;
};

/// S_N for every N in `schedule` (any order, duplicates dropped), from one
/// running sum.
WeylSeries weyl_series(const Sequence& seq, const Integer& h, std::vector<std::uint64_t> schedule, long g);
/// S_N for every N in 1..N_max.
WeylSeries weyl_series_full(const Sequence& seq, const Integer& h, std::uint64_t N_max, long g);

/// M_k = k^2 for k = 1..k_max.
std::vector<std::uint64_t> subsequence_schedule(std::uint64_t k_max);

struct GapReport {
    std::uint64_t checks = 0;
    /// N with a certified |S_N - S_{M_k}| above the bound.
    std::vector<std::uint64_t> violations;
    /// min over checked N of bound - upper(|S_N - S_{M_k}|); may dip below
    /// zero only by the enclosure radii.
    Rational min_slack;
    std::uint64_t blocks = 0;
};

/// Checks |S_N - S_{M_k}| <= 2 (M_{k+1} - M_k) / M_{k+1} for every
/// M_k <= N < M_{k+1} covered by the series.
GapReport gap_bound_check(const WeylSeries& series, const std::vector<std::uint64_t>& schedule);

struct TargetCount {
    QIntervalSet target;
    std::uint64_t hits_min = 0;
    std::uint64_t hits_max = 0;
    Rational measure;

    Rational frequency_min(std::uint64_t N) const { return make_rational(Integer(static_cast<unsigned long>(hits_min)), Integer(static_cast<unsigned long>(N))); }
    Rational frequency_max(std::uint64_t N) const { return make_rational(Integer(static_cast<unsigned long>(hits_max)), Integer(static_cast<unsigned long>(N))); }
    /// max |frequency - measure| over the uncertainty interval.
    Rational deviation(std::uint64_t N) const;
};

struct UDReport {
    std::uint64_t N = 0;
    std::vector<TargetCount> targets;
    /// Enclosure [lo, hi] of the star discrepancy of the first N points.
    std::optional<std::pair<Rational, Rational>> star_discrepancy;
};

struct CountOptions {
    long initial_precision = 64;
    long precision_cap = 4096;
    bool with_discrepancy = false;
};

/// Fractional part of x_n, refined until it avoids integers; nullopt when
/// the cap is reached first.
std::optional<Ball> frac_term(const Sequence& seq, std::uint64_t n, long g, long cap);

/// Hit counts of frac(x_n), n = 1..N, against each target. Boundary cases
/// are refined up to the cap and otherwise widen [hits_min, hits_max].
UDReport empirical_ud(const Sequence& seq, const std::vector<QIntervalSet>& targets, std::uint64_t N,
    const CountOptions& opts = {});

/// Exact star discrepancy of rational points in [0, 1).
Rational star_discrepancy(std::vector<Rational> points);
/// Enclosure of the star discrepancy of points known as balls: the
/// discrepancy moves by at most the largest radius.
std::pair<Rational, Rational> star_discrepancy(const std::vector<Ball>& points);

/// Counter-based generator: stream i of seed s is reproducible independently
/// of how streams are scheduled.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next();
    /// Uniform integer in [0, 2^bits).
    Integer bits(unsigned long count);

private:
    std::uint64_t state_;
};

struct MetricReport {
    std::uint64_t N = 0;
    Integer h;
    Rational K;
    bool koksma_certified = false;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double estimate = 0;
    double std_error = 0;
    /// 1/N + 8/(|h|K) ln(3N)/N, rounded up.
    Rational tight_bound;
    /// (1 + 17/(|h|K)) ln(N)/N, rounded up.
    Rational relaxed_bound;
    /// estimate - 3 * std_error lies below the tight bound.
    bool pass = false;
};

/// Monte Carlo estimate of int_0^1 |S_N(h u(x))|^2 dx.
/// Samples are split into chunks of `chunk` draws, each seeded from
/// (seed, chunk index).
MetricReport metric_bound_mc(const FunctionFamily& f, const Rational& K, const Integer& h, std::uint64_t N,
    std::uint64_t samples, std::uint64_t seed, std::uint64_t chunk = 1024);

/// Upper bound for the measure of {x : |S_N(h u(x))| >= eps}:
/// (1/eps^2) (1 + 17/(|h|K)) ln(N)/N with ln rounded up.
Rational chebyshev_tail(const Rational& eps, const Integer& h, const Rational& K, std::uint64_t N);

/// (1 + 17/(|h|K)) ln(N)/N and 1/N + 8/(|h|K) ln(3N)/N, rounded up.
Rational relaxed_metric_bound(const Integer& h, const Rational& K, std::uint64_t N);
Rational tight_metric_bound(const Integer& h, const Rational& K, std::uint64_t N);

} // namespace udr
