#pragma once

#include "udr/families.hpp"
#include "udr/interval_set.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace udr {

enum class TestMode { ML, Schnorr };

std::string_view to_string(TestMode m);

/// One level V_n of a test, as pairwise disjoint intervals J_{n,k} in
/// enumeration order (k = 0, 1, ...).
struct TestStage {
    std::uint64_t n = 0;
    std::vector<QInterval> J;
    /// Declared measure of V_n: exact in Schnorr mode, an upper bound in ML
    /// mode. Never below the measure of the listed intervals.
    Rational measure;
    /// Index of this stage in the enumeration it was extracted from.
    std::uint64_t source_index = 0;
};

struct TestEnumeration {
    std::vector<TestStage> stages; // stages[i].n == i + 1
    std::vector<Rational> lipschitz; // lipschitz[i] = l_{i+1}
    TestMode mode = TestMode::Schnorr;

    /// Stage n (1-based).
    const TestStage& stage(std::uint64_t n) const;
    Rational ell(std::uint64_t n) const;
    std::uint64_t size() const { return stages.size(); }

    /// Builds stages from raw (possibly overlapping) intervals I_{n,k},
    /// disjointified per stage; measures are computed exactly.
    static TestEnumeration from_raw(const std::vector<std::vector<QInterval>>& raw, std::vector<Rational> lipschitz,
        TestMode mode = TestMode::Schnorr);

    /// JSON: {"stages":[{"n":1,"intervals":[{"lo":"a/b","hi":"c/d"}, ...],
    /// "measure":"p/q"}, ...], "lipschitz":["l1", ...], "mode":"ML"|"SCHNORR"}.
    /// Intervals may also be given as ["lo","hi"] pairs.
    static TestEnumeration from_json(const std::string& text);
    static TestEnumeration from_file(const std::string& path);
};

/// Extracts the subsequence of stages with measure(V_m) <= 2^{-n-3}/l_n:
/// new stage n is the first unused source stage meeting budget n, where l_n
/// comes from `ell`. PRECONDITION_MEASURE when the source runs out before
/// `count` stages are found.
TestEnumeration rescale(const TestEnumeration& source, const LipschitzData& ell, std::uint64_t count);

/// Stage n of a planted test around x: J_{n,0} is centred at x with width
/// 2^{-n-5}/l_n, followed by decoys of widths 2^{-n-5-2k}/l_n placed from
/// the seed. Intervals are clipped to [0,1].
TestEnumeration planted_test(const Rational& x, const LipschitzData& ell, std::uint64_t stages,
    std::uint64_t per_stage, std::uint64_t seed);

struct ImageBounds {
    Rational alpha;
    Rational beta;
};

/// [alpha, beta] containing u_n(J) with beta - alpha <= l_n |J| + 2^-g.
/// UNSUPPORTED_FAMILY for piecewise polynomial families.
ImageBounds image_interval(const FunctionFamily& f, std::uint64_t n, const QInterval& J, long g);

struct OmegaEntry {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    QInterval J;
    Rational alpha;
    Rational beta;
    /// 2^{-n-k-5}
    Rational pad;
    /// (alpha - pad, beta + pad)
    QInterval omega() const { return QInterval(alpha - pad, beta + pad); }
    QInterval image() const { return QInterval(alpha, beta); }
    QInterval left_flank() const { return QInterval(alpha - pad, alpha); }
    QInterval right_flank() const { return QInterval(beta, beta + pad); }
};

struct OmegaPrefix {
    std::uint64_t p = 0;
    std::uint64_t q = 0;
    std::vector<OmegaEntry> entries;
    /// Union of omega_{n,k}, n <= p, k < q.
    QIntervalSet omega;
    /// measure of the Omega_n prefix and its budget 2^{-n-2}, per n.
    std::vector<Rational> stage_measure;
    std::vector<Rational> stage_budget;
};

/// omega_{n,k} for n = 1..p and k < q. PRECONDITION_MEASURE when some V_n
/// exceeds 2^{-n-3}/l_n; BOUND_VIOLATED if the measure chain fails.
OmegaPrefix build_omega(const TestEnumeration& test, const FunctionFamily& f, std::uint64_t p, std::uint64_t q);

struct ZApproximation {
    QIntervalSet Z;
    /// Images and flanks before merging: at most 3pq pieces.
    std::uint64_t piece_count = 0;
    /// 2^{-p-1} + 2^{-p-2} + 2^{-q-2}
    Rational error;
    /// The three contributions, and the constant stated for the first one
    /// before its chain is evaluated (2^{-p-3}).
    Rational approx1;
    Rational approx1_stated;
    Rational approx2;
    Rational approx3;
};

/// Least q >= p such that, for every n <= p, the first q intervals of V_n
/// miss at most 2^{-n-p-3}/l_n of its declared measure.
std::uint64_t choose_q(const TestEnumeration& test, std::uint64_t p);

/// Z and its certificate. Requires q >= p and the approximation condition
/// of choose_q (PRECONDITION_MEASURE otherwise).
ZApproximation approximate_Z(const TestEnumeration& test, const OmegaPrefix& omega);

/// frac of the Omega prefix; measure <= 1/2.
QIntervalSet witness_set(const OmegaPrefix& omega);

/// Omega as an effectively open set: stage j is the (j, max(j, choose_q))
/// prefix, with tail bound 2^{-j}.
Sigma01Prefix omega_sigma01(const TestEnumeration& test, const FunctionFamily& f, std::uint64_t stages);

} // namespace udr
