#include "udr/interval_set.hpp"

#include "udr/error.hpp"

#include <algorithm>

namespace udr {

QInterval::QInterval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_))
{
    require(lo <= hi, "interval: lo > hi");
}

const char* to_string(Membership m)
{
    switch (m) {
    case Membership::In: return "IN";
    case Membership::Out: return "OUT";
    case Membership::Boundary: return "BOUNDARY";
    }
    return "?";
}

QIntervalSet::QIntervalSet(std::vector<QInterval> intervals)
{
    std::erase_if(intervals, [](const QInterval& i) { return i.empty(); });
    std::sort(intervals.begin(), intervals.end(), [](const QInterval& a, const QInterval& b) { return a.lo < b.lo; });
    for (auto& i : intervals) {
        if (!intervals_.empty() && i.lo <= intervals_.back().hi) {
            if (i.hi > intervals_.back().hi)
                intervals_.back().hi = i.hi;
        } else {
            intervals_.push_back(std::move(i));
        }
    }
}

QIntervalSet::QIntervalSet(std::initializer_list<QInterval> intervals)
    : QIntervalSet(std::vector<QInterval>(intervals))
{
}

Rational QIntervalSet::measure() const
{
    Rational m = 0;
    for (const auto& i : intervals_)
        m += i.length();
    return m;
}

bool QIntervalSet::contains(const Rational& x) const
{
    auto it = std::upper_bound(
        intervals_.begin(), intervals_.end(), x, [](const Rational& v, const QInterval& i) { return v < i.lo; });
    if (it == intervals_.begin())
        return false;
    return (--it)->contains(x);
}

Membership QIntervalSet::contains(const Ball& x) const
{
    const Rational lo = x.lower().to_rational();
    const Rational hi = x.upper().to_rational();
    bool touches = false;
    for (const auto& i : intervals_) {
        if (i.lo > hi)
            break;
        if (lo >= i.lo && hi < i.hi)
            return Membership::In;
        if (lo < i.hi && hi >= i.lo)
            touches = true;
    }
    return touches ? Membership::Boundary : Membership::Out;
}

bool QIntervalSet::is_subset_of(const QIntervalSet& other) const
{
    return (*this - other).empty();
}

QIntervalSet operator|(const QIntervalSet& a, const QIntervalSet& b)
{
    std::vector<QInterval> all = a.intervals_;
    all.insert(all.end(), b.intervals_.begin(), b.intervals_.end());
    return QIntervalSet(std::move(all));
}

QIntervalSet operator&(const QIntervalSet& a, const QIntervalSet& b)
{
    std::vector<QInterval> out;
    std::size_t i = 0, j = 0;
    while (i < a.intervals_.size() && j < b.intervals_.size()) {
        const auto& x = a.intervals_[i];
        const auto& y = b.intervals_[j];
        const Rational lo = std::max(x.lo, y.lo);
        const Rational hi = std::min(x.hi, y.hi);
        if (lo < hi)
            out.emplace_back(lo, hi);
        if (x.hi < y.hi)
            ++i;
        else
            ++j;
    }
    QIntervalSet r;
    r.intervals_ = std::move(out);
    return r;
}

QIntervalSet operator-(const QIntervalSet& a, const QIntervalSet& b)
{
    std::vector<QInterval> out;
    std::size_t j = 0;
    for (const auto& x : a.intervals_) {
        Rational cur = x.lo;
        while (j < b.intervals_.size() && b.intervals_[j].hi <= cur)
            ++j;
        std::size_t k = j;
        while (k < b.intervals_.size() && b.intervals_[k].lo < x.hi) {
            const auto& y = b.intervals_[k];
            if (y.lo > cur)
                out.emplace_back(cur, y.lo);
            if (y.hi > cur)
                cur = y.hi;
            if (cur >= x.hi)
                break;
            ++k;
        }
        if (cur < x.hi)
            out.emplace_back(cur, x.hi);
    }
    return QIntervalSet(std::move(out));
}

QIntervalSet operator^(const QIntervalSet& a, const QIntervalSet& b)
{
    return (a - b) | (b - a);
}

QIntervalSet QIntervalSet::clip(const Rational& lo, const Rational& hi) const
{
    if (hi <= lo)
        return {};
    return *this & QIntervalSet{{lo, hi}};
}

QIntervalSet set_union(const QIntervalSet& a, const QIntervalSet& b)
{
    return a | b;
}

QIntervalSet set_intersection(const QIntervalSet& a, const QIntervalSet& b)
{
    return a & b;
}

QIntervalSet set_difference(const QIntervalSet& a, const QIntervalSet& b)
{
    return a - b;
}

std::vector<QInterval> frac_pieces(const QInterval& interval)
{
    if (interval.empty())
        return {};
    const Integer n = floor(interval.lo);
    const Rational alpha = interval.lo - Rational(n);
    const Rational beta = interval.hi - Rational(n);
    if (beta <= 1)
        return {QInterval(alpha, beta)};
    if (beta <= 2)
        return {QInterval(0, beta - 1), QInterval(alpha, 1)};
    return {QInterval(0, 1)};
}

QIntervalSet frac_project(const QIntervalSet& a)
{
    std::vector<QInterval> pieces;
    for (const auto& i : a.intervals()) {
        auto p = frac_pieces(i);
        pieces.insert(pieces.end(), p.begin(), p.end());
    }
    return QIntervalSet(std::move(pieces));
}

std::vector<QInterval> disjointify(const std::vector<QInterval>& enumeration)
{
    std::vector<QInterval> out;
    QIntervalSet seen;
    for (const auto& i : enumeration) {
        const QIntervalSet fresh = QIntervalSet{i} - seen;
        out.insert(out.end(), fresh.intervals().begin(), fresh.intervals().end());
        seen = seen | fresh;
    }
    return out;
}

Sigma01Prefix::Sigma01Prefix(std::vector<QIntervalSet> stages, std::optional<TailBound> tail)
    : stages_(std::move(stages)), tail_(std::move(tail))
{
    for (std::size_t k = 1; k < stages_.size(); ++k)
        require(stages_[k - 1].is_subset_of(stages_[k]), "Sigma01Prefix: stages must be nested");
}

Sigma01Prefix Sigma01Prefix::from_enumeration(const std::vector<QInterval>& enumeration, std::optional<TailBound> tail)
{
    std::vector<QIntervalSet> stages;
    QIntervalSet acc;
    for (const auto& i : enumeration) {
        acc = acc | QIntervalSet{i};
        stages.push_back(acc);
    }
    return Sigma01Prefix(std::move(stages), std::move(tail));
}

const QIntervalSet& Sigma01Prefix::stage(std::size_t k) const
{
    require(k >= 1 && k <= stages_.size(), "Sigma01Prefix: stage index out of range");
    return stages_[k - 1];
}

const QIntervalSet& Sigma01Prefix::last() const
{
    require(!stages_.empty(), "Sigma01Prefix: no stages");
    return stages_.back();
}

Rational Sigma01Prefix::tail_bound(std::size_t k) const
{
    if (!tail_)
        fail(ErrorCode::NoTailBound, "prefix carries no tail-measure bound");
    return (*tail_)(k);
}

ProjectedPrefix frac_project_sigma01(const Sigma01Prefix& s, long g)
{
    if (!s.has_tail_bound())
        fail(ErrorCode::NoTailBound, "frac projection needs a tail-measure bound");
    const Rational target = pow2(-g);
    for (std::size_t p = 1; p <= s.stage_count(); ++p) {
        const Rational t = s.tail_bound(p);
        if (t < target)
            return {frac_project(s.stage(p)), t, p};
    }
    fail(ErrorCode::PrecisionUnreachable,
        "prefix of " + std::to_string(s.stage_count()) + " stages cannot reach error 2^-" + std::to_string(g));
}

} // namespace udr
