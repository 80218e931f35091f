#include "test_support.hpp"

#include "udr/error.hpp"
#include "udr/sigma01.hpp"
#include "udr/weyl.hpp"

#include <doctest.h>

using namespace udr;
using udr::testing::Gen;

namespace {

Rational rat(long p, long q = 1)
{
    return make_rational(p, q);
}

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::InvalidArgument;
}

Rational identity_ell(std::uint64_t n)
{
    return Rational(Integer(static_cast<unsigned long>(n)));
}

// Exact u_n(t) for the rational-valued built-ins.
Rational exact_value(const FunctionFamily& f, std::uint64_t n, const Rational& t)
{
    const auto exact = f.eval(n, Ball::from_rational(t, 200), 180);
    return exact.center().to_rational();
}

} // namespace

TEST_CASE("image intervals")
{
    const auto three = image_interval(FunctionFamily::parse("linear:list=3"), 1, QInterval(rat(1, 4), rat(1, 2)), 64);
    CHECK(three.alpha == rat(3, 4));
    CHECK(three.beta == rat(3, 2));
    const auto geo = image_interval(FunctionFamily::parse("geometric:t=2"), 2, QInterval(0, rat(1, 8)), 64);
    CHECK(geo.alpha == 0);
    CHECK(geo.beta == rat(1, 2));
    const auto neg = image_interval(FunctionFamily::parse("linear:list=-2"), 1, QInterval(rat(1, 4), rat(1, 2)), 64);
    CHECK(neg.alpha == -1);
    CHECK(neg.beta == rat(-1, 2));
    const auto sq = image_interval(FunctionFamily::power(), 2, QInterval(rat(-1, 2), rat(1, 4)), 64);
    CHECK(sq.alpha == 0);
    CHECK(sq.beta == rat(1, 4));

    Gen gen(121);
    const std::vector<FunctionFamily> fams = {FunctionFamily::parse("linear:primes"), FunctionFamily::parse("geometric:t=3/2"),
        FunctionFamily::parse("rotation:a=sqrt2"), FunctionFamily::power()};
    for (int c = 0; c < 100; ++c) {
        const auto& f = fams[c % fams.size()];
        const auto n = static_cast<std::uint64_t>(gen.integer(1, 12));
        const Rational lo = gen.rational_in(0, rat(7, 8), 1 << 16);
        const Rational hi = Rational(lo + gen.rational_in(0, 1, 1 << 16) / 8);
        const QInterval J(lo, hi);
        const long g = 64;
        const auto b = image_interval(f, n, J, g);
        REQUIRE(b.beta - b.alpha <= f.deriv_sup(n) * J.length() + pow2(-g));
        for (int s = 0; s <= 50; ++s) {
            const Rational t = Rational(lo + J.length() * s / 50);
            const Ball v = f.eval(n, Ball::from_rational(t, 200), 120);
            REQUIRE(v.lower() >= b.alpha - pow2(-100));
            REQUIRE(v.upper() <= b.beta + pow2(-100));
        }
    }
    const auto poly = FunctionFamily::constants({0, rat(1, 2)});
    CHECK(code_of([&] { image_interval(poly, 1, QInterval(0, rat(1, 2)), 64); }) == ErrorCode::UnsupportedFamily);
}

TEST_CASE("test enumerations")
{
    const auto t = TestEnumeration::from_raw({{QInterval(0, rat(1, 4)), QInterval(rat(1, 8), rat(1, 2))}, {}}, {1, 2});
    CHECK(t.size() == 2);
    CHECK(t.stage(1).measure == rat(1, 2));
    CHECK(t.stage(1).J.size() == 2);
    CHECK(t.stage(1).J[1] == QInterval(rat(1, 4), rat(1, 2)));
    CHECK(t.stage(2).measure == 0);

    const auto parsed = TestEnumeration::from_json(R"({"mode":"ML","lipschitz":["1","3/2"],
        "stages":[{"n":1,"intervals":[{"lo":"0","hi":"1/64"}],"measure":"1/32"},
                  {"n":2,"intervals":[["1/2","33/64"]]}]})");
    CHECK(parsed.mode == TestMode::ML);
    CHECK(parsed.ell(2) == rat(3, 2));
    CHECK(parsed.stage(1).measure == rat(1, 32));
    CHECK(parsed.stage(2).measure == rat(1, 64));
    CHECK(code_of([] { TestEnumeration::from_json("{"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { TestEnumeration::from_json(R"({"lipschitz":["1"],"stages":[{"n":2,"intervals":[]}]})"); })
        == ErrorCode::ParseError);
    CHECK(code_of([] {
        TestEnumeration::from_json(R"({"lipschitz":["1"],"stages":[{"intervals":[["0","1/2"]],"measure":"1/4"}]})");
    }) == ErrorCode::ParseError);
}

TEST_CASE("rescaling extracts a subsequence")
{
    std::vector<std::vector<QInterval>> raw;
    for (long m = 1; m <= 30; ++m)
        raw.push_back({QInterval(0, pow2(-m))});
    const auto src = TestEnumeration::from_raw(raw, std::vector<Rational>(30, 1));
    const auto r = rescale(src, identity_ell, 5);
    CHECK(r.size() == 5);
    for (std::uint64_t n = 1; n <= 5; ++n) {
        const auto& st = r.stage(n);
        CHECK(st.measure <= pow2(-static_cast<long>(n) - 3) / Rational(Integer(static_cast<unsigned long>(n))));
        if (n > 1)
            CHECK(st.source_index > r.stage(n - 1).source_index);
    }
    CHECK(r.stage(1).source_index == 4);
    CHECK(r.stage(2).source_index == 6);
    CHECK(r.stage(3).source_index == 8);
    CHECK(code_of([&] { rescale(src, identity_ell, 40); }) == ErrorCode::PreconditionMeasure);
}

TEST_CASE("omega prefix and its measure chain")
{
    const auto lin = FunctionFamily::parse("linear:n");
    const auto single = TestEnumeration::from_raw({{QInterval(0, pow2(-4))}}, {1});
    const auto om = build_omega(single, lin, 1, 1);
    CHECK(om.omega.measure() <= pow2(-3));
    CHECK(om.stage_measure[0] == pow2(-4) + 2 * pow2(-6));
    CHECK(om.stage_budget[0] == pow2(-3));

    const auto empty = TestEnumeration::from_raw({{}, {}, {}}, {1, 2, 3});
    const auto e = build_omega(empty, lin, 3, 4);
    CHECK(e.omega.empty());
    CHECK(witness_set(e).empty());

    const auto big = TestEnumeration::from_raw({{QInterval(0, pow2(-3))}}, {1});
    CHECK(code_of([&] { build_omega(big, lin, 1, 1); }) == ErrorCode::PreconditionMeasure);

    const auto test = planted_test(rat(1, 3), identity_ell, 8, 6, 3);
    const auto w = build_omega(test, lin, 8, 8);
    CHECK(w.omega.measure() <= rat(1, 2));
    for (std::size_t i = 0; i < w.stage_measure.size(); ++i)
        CHECK(w.stage_measure[i] <= w.stage_budget[i]);
    Gen gen(122);
    for (std::uint64_t n = 1; n <= 8; ++n)
        for (const auto& J : test.stage(n).J)
            for (int s = 0; s < 10; ++s) {
                const Rational x = Rational(J.lo + J.length() * gen.rational_in(0, 1, 1 << 20));
                REQUIRE(w.omega.contains(exact_value(lin, n, x)));
            }
}

TEST_CASE("Z approximation")
{
    const auto lin = FunctionFamily::parse("linear:n");
    const auto test = planted_test(rat(1, 3), identity_ell, 12, 16, 9);
    for (std::uint64_t p : {2UL, 4UL, 6UL}) {
        const std::uint64_t q = std::max<std::uint64_t>(p + 2, choose_q(test, p));
        const auto om = build_omega(test, lin, p, q);
        const auto z = approximate_Z(test, om);
        CHECK(z.piece_count <= 3 * p * q);
        CHECK(z.Z.size() <= 3 * p * q);
        CHECK(z.error == pow2(-static_cast<long>(p) - 1) + pow2(-static_cast<long>(p) - 2) + pow2(-static_cast<long>(q) - 2));
        CHECK(z.error <= pow2(-static_cast<long>(p)));
        CHECK(z.approx1_stated == pow2(-static_cast<long>(p) - 3));
        const auto larger = build_omega(test, lin, 2 * p, 2 * q);
        CHECK(z.Z.is_subset_of(larger.omega));
        CHECK(larger.omega.measure() - z.Z.measure() <= z.error);
    }
    const auto om = build_omega(test, lin, 4, 3);
    CHECK_THROWS_AS(approximate_Z(test, om), Error);
}

TEST_CASE("witness set and hit property")
{
    const auto lin = FunctionFamily::parse("linear:n");
    const auto test = planted_test(rat(1, 3), identity_ell, 6, 8, 1);
    const auto om = build_omega(test, lin, 6, 8);
    const auto w = witness_set(om);
    CHECK(w.measure() <= om.omega.measure());
    CHECK(w.measure() <= rat(1, 2));
    for (std::uint64_t n = 1; n <= 6; ++n)
        CHECK(w.contains(frac_exact(Rational(rat(1, 3) * n))));
    const auto seq = family_sequence(lin, RealOracle::rational(rat(1, 3)));
    for (std::uint64_t N = 1; N <= 6; ++N) {
        const auto r = empirical_ud(seq, {w}, N);
        CHECK(r.targets[0].hits_min == N);
    }

    const auto geo = FunctionFamily::parse("geometric:t=2");
    const auto gt = planted_test(rat(2, 7), [](std::uint64_t n) { return pow2(static_cast<long>(n)); }, 5, 4, 2);
    const auto gw = witness_set(build_omega(gt, geo, 5, 5));
    for (std::uint64_t n = 1; n <= 5; ++n)
        CHECK(gw.contains(frac_exact(Rational(rat(2, 7) * pow2(static_cast<long>(n))))));
}

TEST_CASE("omega as an effectively open set")
{
    const auto lin = FunctionFamily::parse("linear:n");
    const auto test = planted_test(rat(1, 3), identity_ell, 8, 10, 4);
    const auto s = omega_sigma01(test, lin, 6);
    CHECK(s.stage_count() == 6);
    for (std::size_t k = 1; k <= 6; ++k)
        CHECK(s.tail_bound(k) <= pow2(-static_cast<long>(k)));
    const auto proj = frac_project_sigma01(s, 3);
    CHECK(proj.stage == 4);
    CHECK(proj.error < pow2(-3));
    CHECK(proj.set.measure() <= rat(1, 2));
}
