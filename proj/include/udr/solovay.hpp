#pragma once

#include "udr/families.hpp"
#include "udr/interval_set.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace udr {

/// How theta_k is bounded.
///  Lipschitz:     (2 pi |h| / N) sum_{n<=N} sup|u_n'|, a bound on the
///                 derivative of t -> S_{N,h}(u(t)).
///  SampledModulus: sup_t |S_{N,h}(u'(t))|, the modulus of the Weyl sum of
///                 the derivative values. Not a Lipschitz constant in general.
enum class ThetaMode { Lipschitz, SampledModulus };

std::string_view to_string(ThetaMode m);

struct SolovaySpec {
    FunctionFamily family;
    Rational K;
    Integer h;
    Rational eps;
    ThetaMode theta_mode = ThetaMode::Lipschitz;
    /// build_Bk refuses grids with more than 2^grid_cap_bits + 1 points.
    long grid_cap_bits = 16;

    SolovaySpec(FunctionFamily f, Rational K, Integer h, Rational eps);

    /// 8/eps^2 (1 + 17/(|h| K)).
    Rational alpha() const;
};

struct ThetaBound {
    Rational theta;
    Integer p;
};

/// Upper bound for theta_k and p_k = ceil(theta) + 1.
ThetaBound theta_bound(const SolovaySpec& spec, std::uint64_t k);

/// Least a >= 0 with 2^-a < eps / (8 p).
long choose_a(const Rational& eps, const Integer& p);

/// Certified enclosure [lo, hi] of |S_{N,h}(u(t))| with hi - lo <= width.
std::pair<Rational, Rational> weyl_modulus(const SolovaySpec& spec, std::uint64_t N, const Rational& t,
    const Rational& width);

/// q(k,i): a dyadic within eps/8 of |S_{k^2,h}(u(i 2^-a))|.
Rational grid_sample(const SolovaySpec& spec, std::uint64_t k, long a, const Integer& i);
/// All q(k,i), i = 0..2^a. GRID_TOO_LARGE above the cap.
std::vector<Rational> grid_samples(const SolovaySpec& spec, std::uint64_t k, long a);

struct BkSet {
    std::uint64_t k = 0;
    long a = 0;
    Integer p;
    Rational theta;
    std::vector<Rational> q;
    /// i with q(k,i) > 3 eps / 4.
    std::vector<std::uint64_t> X;
    QIntervalSet intervals;
};

/// [0,1] intersected with the union of ((i-1) 2^-a, (i+1) 2^-a), i in X_k.
/// Stored half-open; the dropped endpoints are null sets.
BkSet build_Bk(const SolovaySpec& spec, std::uint64_t k);

/// B_k without materializing the grid: membership of a rational t is
/// decided from the at most two grid samples whose interval can contain t.
class LazyBk {
public:
    LazyBk(const SolovaySpec& spec, std::uint64_t k);

    std::uint64_t k() const { return k_; }
    long a() const { return a_; }
    const Integer& p() const { return p_; }
    const Rational& theta() const { return theta_; }

    bool contains(const Rational& t);
    /// q(k,i), cached.
    Rational sample(const Integer& i);

private:
    SolovaySpec spec_;
    std::uint64_t k_;
    long a_;
    Integer p_;
    Rational theta_;
    std::map<Integer, Rational> cache_;
};

struct InclusionReport {
    std::uint64_t k = 0;
    std::uint64_t samples = 0;
    /// |S| certified > eps but t outside B_k.
    std::uint64_t lower_violations = 0;
    /// t in B_k but |S| certified < eps/2.
    std::uint64_t upper_violations = 0;
    /// Points whose enclosure touched a threshold that mattered.
    std::uint64_t undecided = 0;
    std::uint64_t in_Bk = 0;
    std::uint64_t above_eps = 0;

    std::uint64_t violations() const { return lower_violations + upper_violations; }
};

/// Samples rational t in [0,1] (prime denominator 10^9 + 7, seeded) and checks
/// A_k^eps within B_k within A_k^{eps/2}.
InclusionReport inclusion_check(const SolovaySpec& spec, std::uint64_t k, std::uint64_t samples, std::uint64_t seed);

/// alpha ln(k) / k^2 with ln rounded up. Requires k >= 2.
Rational measure_bound(const SolovaySpec& spec, std::uint64_t k);

struct MeasureCheck {
    std::uint64_t k = 0;
    /// Exact measure of B_k when the grid was built.
    std::optional<Rational> measure;
    /// measure, or 1 (B_k lies in [0,1]) when the grid exceeds the cap.
    Rational measure_upper;
    Rational bound;
    bool holds = false;
};

/// Compares measure(B_k) with measure_bound; BOUND_VIOLATED when an exactly
/// computed measure exceeds it.
MeasureCheck check_measure(const SolovaySpec& spec, std::uint64_t k);

/// alpha (ln L + 1) / L with ln rounded up. Requires L >= 3.
Rational tail_sum_bound(const SolovaySpec& spec, std::uint64_t L);

/// sum_{k=L+1}^{L+count} alpha ln(k)/k^2 with ln rounded up.
Rational summed_term_bounds(const SolovaySpec& spec, std::uint64_t L, std::uint64_t count);

struct TotalMeasure {
    Rational sum;
    Rational error;
    std::uint64_t L = 0;
};

/// Least L >= 3 with tail_sum_bound(L) <= delta.
std::uint64_t choose_L(const SolovaySpec& spec, const Rational& delta);

/// sum_{k=2}^{L} measure(B_k) with error certificate delta.
/// GRID_TOO_LARGE when some B_k cannot be built.
TotalMeasure total_measure(const SolovaySpec& spec, const Rational& delta);

struct HScan {
    Integer h;
    /// Largest certified lower bound of |S_{k^2,h}(u(x))| over the scan.
    Rational lower;
    std::uint64_t k = 0;
};

/// Scans h in [-H, H] \ {0} and k in [2, k_max] at a rational x.
HScan scan_h(const FunctionFamily& f, const Rational& x, long H, std::uint64_t k_max);

} // namespace udr
