#pragma once

#include "udr/interval_set.hpp"
#include "udr/oracle.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace udr {

/// Integer sequence n -> a_n for n >= 1: affine c*n + d, an explicit list,
/// or the primes. Construction rejects repeated values.
class IntSequence {
public:
    static IntSequence affine(const Integer& c, const Integer& d);
    static IntSequence list(std::vector<Integer> values);
    static IntSequence primes();

    Integer at(std::uint64_t n) const;
    /// Number of defined terms (nullopt when infinite).
    std::optional<std::uint64_t> length() const;
    /// min |a_m - a_n| over m != n <= n_max.
    Integer min_gap(std::uint64_t n_max) const;
    std::string describe() const;

private:
    enum class Kind { Affine, List, Primes };
    Kind kind_ = Kind::Affine;
    Integer c_ = 1;
    Integer d_ = 0;
    std::shared_ptr<const std::vector<Integer>> values_;
};

struct Polynomial {
    /// coeffs[i] multiplies x^i.
    std::vector<Rational> coeffs;

    Rational eval(const Rational& x) const;
    Ball eval(const Ball& x, long g) const;
    Polynomial derivative() const;
    /// sum |c_i|, an upper bound of |p| on [-1, 1].
    Rational abs_sum() const;
};

struct PolyPiece {
    Rational lo;
    Rational hi;
    Polynomial poly;
};

class FunctionFamily {
public:
    struct Linear {
        IntSequence a;
    };
    struct Geometric {
        Rational t;
    };
    struct Rotation {
        RealOracle a;
    };
    struct PowerMap {};
    /// Index n uses functions[n-1], or functions[(n-1) mod size] when cyclic.
    struct PiecewisePoly {
        std::vector<std::vector<PolyPiece>> functions;
        bool cyclic = false;
    };
    using Kind = std::variant<Linear, Geometric, Rotation, PowerMap, PiecewisePoly>;

    explicit FunctionFamily(Kind kind);

    static FunctionFamily linear(IntSequence a) { return FunctionFamily(Linear{std::move(a)}); }
    static FunctionFamily geometric(const Rational& t);
    static FunctionFamily rotation(const RealOracle& a) { return FunctionFamily(Rotation{a}); }
    static FunctionFamily power() { return FunctionFamily(PowerMap{}); }
    static FunctionFamily piecewise(std::vector<std::vector<PolyPiece>> functions, bool cyclic = false);
    /// u_n = values[(n-1) mod size], constant functions.
    static FunctionFamily constants(const std::vector<Rational>& values);

    /// Sequence-spec grammar: "linear:n", "linear:2n+1", "linear:list=3,5,11",
    /// "linear:primes", "geometric:t=2", "rotation:a=sqrt2", "power",
    /// "poly:file=<path>", "const:list=0,1/2".
    static FunctionFamily parse(const std::string& spec);

    const Kind& kind() const { return kind_; }
    bool is_builtin() const { return !std::holds_alternative<PiecewisePoly>(kind_); }
    /// Number of indices available (nullopt when unbounded).
    std::optional<std::uint64_t> length() const;
    std::string describe() const;

    /// Enclosures of u_n(t) and u_n'(t) for every t in x; x within [0, 1].
    /// Results are trimmed to the 2^-g grid, so their radius may exceed the
    /// input-induced spread by at most 2^-g.
    Ball eval(std::uint64_t n, const Ball& x, long g) const;
    Ball deriv(std::uint64_t n, const Ball& x, long g) const;

    /// ell_n >= sup |u_n'| on [0, 1].
    Rational deriv_sup(std::uint64_t n) const;
    /// Upper bound for sup |u_n''| on [0, 1].
    Rational deriv2_bound(std::uint64_t n) const;

    /// True for families whose members are monotone on [0, 1] with a closed
    /// form image of an interval.
    bool has_symbolic_images() const { return is_builtin(); }

    /// u_n(t) with radius <= 2^-g, refining x as needed.
    /// PRECISION_UNREACHABLE if the working precision would exceed `cap`.
    Ball term(std::uint64_t n, const RealOracle& x, long g, long cap = 1 << 16) const;

private:
    const std::vector<PolyPiece>& pieces(std::uint64_t n) const;

    Kind kind_;
};

using LipschitzData = std::function<Rational(std::uint64_t)>;

inline LipschitzData lipschitz_of(const FunctionFamily& f)
{
    return [f](std::uint64_t n) { return f.deriv_sup(n); };
}

/// Precision-indexed sequence of reals x_n, n >= 1.
using Sequence = std::function<Ball(std::uint64_t n, long g)>;

/// x_n = u_n(x).
Sequence family_sequence(const FunctionFamily& f, const RealOracle& x);
/// x_n = x_n exact rationals given by a closed form.
Sequence rational_sequence(std::function<Rational(std::uint64_t)> value);
/// x_n = h * x_n.
Sequence scaled_sequence(Sequence s, const Integer& h);

enum class KoksmaVerdict { Certified, Refuted, Inconclusive };
enum class KoksmaMethod { Symbolic, Grid };

const char* to_string(KoksmaVerdict v);
const char* to_string(KoksmaMethod m);

struct KoksmaWitness {
    std::uint64_t m;
    std::uint64_t n;
    Rational x;
    /// Derivative gap |u_m'(x) - u_n'(x)| when exact, otherwise its midpoint.
    Rational gap;
    /// true when the witness shows a non-monotone difference instead.
    bool monotonicity = false;
};

struct KoksmaReport {
    Rational claimed_K;
    KoksmaVerdict verdict = KoksmaVerdict::Inconclusive;
    std::optional<KoksmaWitness> witness;
    std::uint64_t checked_pairs = 0;
    KoksmaMethod method = KoksmaMethod::Symbolic;
};

/// Checks |u_m' - u_n'| >= K and monotone differences for all m != n <= n_max.
/// Built-in families are decided in closed form; piecewise polynomials are
/// sampled on a grid of `grid` + 1 points and at best INCONCLUSIVE.
KoksmaReport koksma_check(const FunctionFamily& f, const Rational& K, std::uint64_t n_max, std::uint64_t grid = 256);

struct Prop15Result {
    bool dyadic = false;
    /// x = p / 2^k in the dyadic case.
    unsigned long k = 0;
    std::vector<std::uint64_t> exponents;
};

/// Exponents a_1 < a_2 < ... with frac(2^(a_j - 1) x) in [0, 1/2): the
/// positions of zero binary digits of x, or k, k+1, ... when x = p/2^k.
Prop15Result build_prop15_exponents(const RealOracle& x, std::size_t count, const DigitOptions& opts = {});

/// Stage n adds the dyadic cell of width 2^-(2n+1) holding frac(n x), read
/// off the first 2n+1 binary digits; tail_bound(p) = 2^(-2p+2) / 3.
Sigma01Prefix build_prop23_set(const RealOracle& x, std::size_t p, const DigitOptions& opts = {});

/// The single cell added at stage n.
QInterval prop23_cell(const RealOracle& x, std::size_t n, const DigitOptions& opts = {});

/// [0,1) intersected with the union over n <= count of
/// [c_n - 2^(-n-2), c_n + 2^(-n-2)), c_n the center of the n-th point.
/// Points must have radius < 2^(-n-2).
QIntervalSet build_pitfall_set(const std::vector<Ball>& points, std::size_t count);

} // namespace udr
