#pragma once

#include "udr/ball.hpp"
#include "udr/rational.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace udr {

/// Half-open rational interval [lo, hi).
struct QInterval {
    Rational lo;
    Rational hi;

    QInterval() = default;
    QInterval(Rational lo_, Rational hi_);

    Rational length() const { return hi - lo; }
    bool empty() const { return hi <= lo; }
    bool contains(const Rational& x) const { return lo <= x && x < hi; }

    friend bool operator==(const QInterval&, const QInterval&) = default;
};

enum class Membership { In, Out, Boundary };

const char* to_string(Membership m);

/// Finite union of half-open rational intervals in canonical form: sorted,
/// pairwise disjoint, non-empty, with touching intervals merged.
class QIntervalSet {
public:
    QIntervalSet() = default;
    /// Canonicalizes an arbitrary list (overlaps and empties allowed).
    explicit QIntervalSet(std::vector<QInterval> intervals);
    QIntervalSet(std::initializer_list<QInterval> intervals);

    static QIntervalSet unit() { return QIntervalSet{{Rational(0), Rational(1)}}; }

    const std::vector<QInterval>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    bool empty() const { return intervals_.empty(); }

    Rational measure() const;
    bool contains(const Rational& x) const;
    /// IN when the whole ball lies in one interval, OUT when it misses every
    /// interval, BOUNDARY otherwise.
    Membership contains(const Ball& x) const;

    bool is_subset_of(const QIntervalSet& other) const;

    friend QIntervalSet operator|(const QIntervalSet& a, const QIntervalSet& b);
    friend QIntervalSet operator&(const QIntervalSet& a, const QIntervalSet& b);
    friend QIntervalSet operator-(const QIntervalSet& a, const QIntervalSet& b);
    /// Symmetric difference.
    friend QIntervalSet operator^(const QIntervalSet& a, const QIntervalSet& b);
    friend bool operator==(const QIntervalSet&, const QIntervalSet&) = default;

    QIntervalSet clip(const Rational& lo, const Rational& hi) const;

private:
    std::vector<QInterval> intervals_;
};

QIntervalSet set_union(const QIntervalSet& a, const QIntervalSet& b);
QIntervalSet set_intersection(const QIntervalSet& a, const QIntervalSet& b);
QIntervalSet set_difference(const QIntervalSet& a, const QIntervalSet& b);

/// The pieces {I} of a single interval, before merging: one piece when I
/// sits in one unit cell, [alpha, 1) and [0, beta) when it crosses one
/// integer, [0, 1) when it covers a whole unit cell.
std::vector<QInterval> frac_pieces(const QInterval& interval);

/// {a} = { frac(t) : t in a } as a subset of [0, 1).
QIntervalSet frac_project(const QIntervalSet& a);

/// I_k minus the union of the earlier I_p, split into disjoint pieces and
/// kept in enumeration order. The union of the output equals the union of
/// the input.
std::vector<QInterval> disjointify(const std::vector<QInterval>& enumeration);

/// Finite prefix of an effectively open set. stage(k) (k >= 1) is the union
/// of the intervals enumerated so far; tail_bound(k), when known, bounds the
/// measure of what stage k is still missing.
class Sigma01Prefix {
public:
    using TailBound = std::function<Rational(std::size_t)>;

    Sigma01Prefix() = default;
    explicit Sigma01Prefix(std::vector<QIntervalSet> stages, std::optional<TailBound> tail = std::nullopt);

    /// Builds the stages from an enumeration: stage k is I_1 u ... u I_k.
    static Sigma01Prefix from_enumeration(
        const std::vector<QInterval>& enumeration, std::optional<TailBound> tail = std::nullopt);

    std::size_t stage_count() const { return stages_.size(); }
    const QIntervalSet& stage(std::size_t k) const;
    const QIntervalSet& last() const;
    const std::vector<QIntervalSet>& stages() const { return stages_; }

    bool has_tail_bound() const { return tail_.has_value(); }
    Rational tail_bound(std::size_t k) const;

private:
    std::vector<QIntervalSet> stages_;
    std::optional<TailBound> tail_;
};

struct ProjectedPrefix {
    QIntervalSet set;
    /// Bound on measure({S}) - measure(set).
    Rational error;
    std::size_t stage;
};

/// frac_project of the least stage p with tail_bound(p) < 2^-g.
/// NO_TAIL_BOUND without a tail bound; PRECISION_UNREACHABLE when the prefix
/// is too short to reach 2^-g.
ProjectedPrefix frac_project_sigma01(const Sigma01Prefix& s, long g);

} // namespace udr
