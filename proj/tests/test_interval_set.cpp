#include "test_support.hpp"

#include "udr/error.hpp"
#include "udr/interval_set.hpp"

#include <bitset>
#include <ostream>

#include <doctest.h>

using namespace udr;
using udr::testing::Gen;

namespace {

Rational q(const char* s)
{
    return parse_rational(s);
}

QInterval iv(const char* lo, const char* hi)
{
    return QInterval(q(lo), q(hi));
}

// Sets whose endpoints lie on the grid (1/D)Z inside [lo_cell/D, hi_cell/D),
// mirrored as a bitset of grid cells: an independent membership model.
constexpr int D = 12;
constexpr int CELLS = 8 * D; // covers [-4, 4)
using Cells = std::bitset<CELLS>;

struct Sample {
    QIntervalSet set;
    Cells cells;
};

Sample random_grid_set(Gen& gen)
{
    std::vector<QInterval> raw;
    Cells cells;
    const int count = static_cast<int>(gen.integer(0, 6));
    for (int k = 0; k < count; ++k) {
        const long a = gen.integer(0, CELLS - 1);
        const long b = gen.integer(a, std::min<long>(CELLS, a + gen.integer(0, 40)));
        raw.emplace_back(make_rational(a - 4 * D, D), make_rational(b - 4 * D, D));
        for (long c = a; c < b; ++c)
            cells.set(static_cast<std::size_t>(c));
    }
    return {QIntervalSet(raw), cells};
}

Cells to_cells(const QIntervalSet& s)
{
    Cells c;
    for (int k = 0; k < CELLS; ++k)
        if (s.contains(make_rational(2 * (k - 4 * D) + 1, 2 * D)))
            c.set(static_cast<std::size_t>(k));
    return c;
}

Rational cells_measure(const Cells& c)
{
    return make_rational(static_cast<long>(c.count()), D);
}

bool canonical(const QIntervalSet& s)
{
    const auto& v = s.intervals();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].empty())
            return false;
        if (i > 0 && !(v[i - 1].hi < v[i].lo))
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("union examples")
{
    CHECK((QIntervalSet{iv("0", "1/2")} | QIntervalSet{iv("1/2", "1")}) == QIntervalSet{iv("0", "1")});
    CHECK((QIntervalSet{iv("0", "1/4")} | QIntervalSet{}) == QIntervalSet{iv("0", "1/4")});
    CHECK((QIntervalSet{iv("0", "1/2")} | QIntervalSet{iv("1/4", "3/4")}) == QIntervalSet{iv("0", "3/4")});
    CHECK(QIntervalSet{iv("0", "1/2")}.size() == 1);
}

TEST_CASE("measure examples")
{
    CHECK(QIntervalSet{iv("0", "1/3"), iv("1/2", "2/3")}.measure() == make_rational(1, 2));
    CHECK(QIntervalSet{}.measure() == 0);
    CHECK(QIntervalSet::unit().measure() == 1);
}

TEST_CASE("ball membership")
{
    const QIntervalSet half{iv("0", "1/2")};
    auto ball = [](const char* c) { return Ball::from_interval(q(c) - make_rational(1, 100), q(c) + make_rational(1, 100), 20); };
    CHECK(half.contains(ball("1/4")) == Membership::In);
    CHECK(half.contains(ball("3/4")) == Membership::Out);
    CHECK(half.contains(ball("1/2")) == Membership::Boundary);
    CHECK(half.contains(Ball(Dyadic(1, -1))) == Membership::Out);
    CHECK(half.contains(Ball(Dyadic(0))) == Membership::In);
    CHECK(std::string(to_string(Membership::Boundary)) == "BOUNDARY");
}

TEST_CASE("intervals reject reversed endpoints")
{
    CHECK_THROWS_AS(iv("1/2", "1/3"), Error);
}

TEST_CASE("frac projection case table")
{
    // Covers a whole unit cell.
    CHECK(frac_project(QIntervalSet{iv("0.5", "2.3")}) == QIntervalSet::unit());
    CHECK(frac_pieces(iv("0.5", "2.3")) == std::vector<QInterval>{iv("0", "1")});
    // Crosses one integer.
    CHECK(frac_pieces(iv("1.2", "2.7")) == std::vector<QInterval>{iv("0", "0.7"), iv("0.2", "1")});
    CHECK(frac_project(QIntervalSet{iv("1.2", "2.7")}) == QIntervalSet::unit());
    CHECK(frac_project(QIntervalSet{iv("1.6", "2.3")}) == QIntervalSet{iv("0", "0.3"), iv("0.6", "1")});
    // Already inside [0, 1).
    CHECK(frac_project(QIntervalSet{iv("0.2", "0.5")}) == QIntervalSet{iv("0.2", "0.5")});
    // Negative and integer-aligned endpoints.
    CHECK(frac_project(QIntervalSet{iv("-1/4", "0")}) == QIntervalSet{iv("3/4", "1")});
    CHECK(frac_project(QIntervalSet{iv("3", "4")}) == QIntervalSet::unit());
}

TEST_CASE("set algebra against a cell model")
{
    Gen gen(101);
    for (int t = 0; t < 1000; ++t) {
        const Sample a = random_grid_set(gen);
        const Sample b = random_grid_set(gen);
        const Sample c = random_grid_set(gen);
        REQUIRE(canonical(a.set));
        REQUIRE(to_cells(a.set) == a.cells);
        REQUIRE(a.set.measure() == cells_measure(a.cells));

        const auto u = a.set | b.set;
        const auto i = a.set & b.set;
        const auto d = a.set - b.set;
        REQUIRE(canonical(u));
        REQUIRE(canonical(i));
        REQUIRE(canonical(d));
        REQUIRE(to_cells(u) == (a.cells | b.cells));
        REQUIRE(to_cells(i) == (a.cells & b.cells));
        REQUIRE(to_cells(d) == (a.cells & ~b.cells));
        REQUIRE(to_cells(a.set ^ b.set) == (a.cells ^ b.cells));

        REQUIRE(u == (b.set | a.set));
        REQUIRE(((a.set | b.set) | c.set) == (a.set | (b.set | c.set)));
        REQUIRE((a.set | a.set) == a.set);
        REQUIRE((a.set & a.set) == a.set);
        REQUIRE(u.measure() + i.measure() == a.set.measure() + b.set.measure());
        REQUIRE(u.measure() <= a.set.measure() + b.set.measure());
        REQUIRE(i.is_subset_of(a.set));
        REQUIRE(a.set.is_subset_of(u));
    }
}

TEST_CASE("frac projection properties")
{
    Gen gen(202);
    for (int t = 0; t < 1000; ++t) {
        // Wide sets spanning several integers, with arbitrary rational endpoints.
        std::vector<QInterval> raw;
        const int count = static_cast<int>(gen.integer(1, 5));
        for (int k = 0; k < count; ++k) {
            const Rational lo = gen.rational(4000, 997);
            const Rational len = make_rational(gen.integer(0, 3000), gen.integer(1, 997));
            raw.emplace_back(lo, lo + len);
        }
        const QIntervalSet a(raw);
        const QIntervalSet f = frac_project(a);
        REQUIRE(f.measure() <= a.measure());
        REQUIRE(f.is_subset_of(QIntervalSet::unit()));
        REQUIRE(frac_project(f) == f);

        // Points of a land in the projection.
        for (int s = 0; s < 5; ++s) {
            const auto& pick = a.intervals()[static_cast<std::size_t>(gen.integer(0, static_cast<long>(a.size()) - 1))];
            const Rational x = gen.rational_in(pick.lo, pick.hi);
            REQUIRE(f.contains(frac_exact(x)));
        }
        // Points outside the projection have no translate in a.
        const Integer lo_int = floor(a.intervals().front().lo);
        const Integer hi_int = ceil(a.intervals().back().hi);
        for (int s = 0; s < 5; ++s) {
            const Rational y = gen.rational_in(0, 1);
            if (f.contains(y))
                continue;
            for (Integer m = lo_int - 1; m <= hi_int; ++m)
                REQUIRE(!a.contains(Rational(y + Rational(m))));
        }
    }
}

TEST_CASE("disjointify")
{
    const std::vector<QInterval> e = {iv("0", "1/2"), iv("1/4", "3/4"), iv("1/8", "1/4"), iv("-1", "2")};
    const auto d = disjointify(e);
    CHECK(d == std::vector<QInterval>{iv("0", "1/2"), iv("1/2", "3/4"), iv("-1", "0"), iv("3/4", "2")});
    CHECK(QIntervalSet(d) == QIntervalSet(e));
    Rational total = 0;
    for (const auto& i : d)
        total += i.length();
    CHECK(total == QIntervalSet(e).measure());
}

TEST_CASE("sigma01 prefixes")
{
    const auto prefix = Sigma01Prefix::from_enumeration({iv("0.2", "0.5")}, [](std::size_t) { return Rational(0); });
    for (long g : {0L, 10L, 100L}) {
        const auto r = frac_project_sigma01(prefix, g);
        CHECK(r.set == QIntervalSet{iv("0.2", "0.5")});
        CHECK(r.error == 0);
    }
    const auto bare = Sigma01Prefix::from_enumeration({iv("0", "1/2")});
    CHECK_THROWS_AS(frac_project_sigma01(bare, 4), Error);
    try {
        frac_project_sigma01(bare, 4);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoTailBound);
    }

    CHECK_THROWS_AS(Sigma01Prefix({QIntervalSet{iv("0", "1")}, QIntervalSet{iv("0", "1/2")}}), Error);
}

TEST_CASE("sigma01 projection error against a longer prefix")
{
    // I_k = [k + 1/3, k + 1/3 + 4^-k): the tail after stage p has measure
    // sum_{k>p} 4^-k = 4^-p / 3.
    std::vector<QInterval> e;
    for (long k = 1; k <= 40; ++k)
        e.emplace_back(Rational(k) + make_rational(1, 3), Rational(k) + make_rational(1, 3) + pow2(-2 * k));
    const auto s = Sigma01Prefix::from_enumeration(e, [](std::size_t p) -> Rational { return pow2(-2 * static_cast<long>(p)) / 3; });
    for (long g = 1; g <= 60; ++g) {
        const auto r = frac_project_sigma01(s, g);
        REQUIRE(r.error < pow2(-g));
        const Rational full = frac_project(s.last()).measure();
        REQUIRE(full - r.set.measure() <= r.error);
        REQUIRE(r.set.is_subset_of(frac_project(s.last())));
        if (r.stage > 1)
            REQUIRE(s.tail_bound(r.stage - 1) >= pow2(-g));
    }
    try {
        frac_project_sigma01(s, 200);
        FAIL("expected PRECISION_UNREACHABLE");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::PrecisionUnreachable);
    }
}
