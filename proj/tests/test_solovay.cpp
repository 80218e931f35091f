#include "test_support.hpp"

#include "udr/elementary.hpp"
#include "udr/error.hpp"
#include "udr/solovay.hpp"
#include "udr/weyl.hpp"

#include <doctest.h>

#include <cmath>

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

SolovaySpec doubling_spec()
{
    return SolovaySpec(FunctionFamily::parse("geometric:t=2"), 1, 1, rat(1, 2));
}

// u_n = 0, 1/2, 0, 1/2, ...: S vanishes for even N.
SolovaySpec cancelling_spec()
{
    return SolovaySpec(FunctionFamily::parse("const:list=0,1/2"), 1, 1, rat(1, 2));
}

} // namespace

TEST_CASE("spec validation and alpha")
{
    const auto f = FunctionFamily::parse("linear:n");
    CHECK_THROWS_AS(SolovaySpec(f, 0, 1, rat(1, 2)), Error);
    CHECK_THROWS_AS(SolovaySpec(f, 1, 0, rat(1, 2)), Error);
    CHECK_THROWS_AS(SolovaySpec(f, 1, 1, rat(3)), Error);
    CHECK(SolovaySpec(f, 1, 1, rat(1, 2)).alpha() == 576);
    CHECK(SolovaySpec(f, 1, -2, rat(1)).alpha() == Rational(8) * (1 + rat(17, 2)));
}

TEST_CASE("theta bounds")
{
    SolovaySpec lin(FunctionFamily::parse("linear:n"), 1, 1, rat(1, 2));
    lin.theta_mode = ThetaMode::SampledModulus;
    const auto t1 = theta_bound(lin, 1);
    CHECK(t1.theta == 1);
    CHECK(t1.p == 2);

    // Term-wise derivative magnitude 2 pi |h| |u_n'| summed and averaged.
    const auto geo = doubling_spec();
    const auto t2 = theta_bound(geo, 2);
    const double expect = 2 * M_PI * (2 + 4 + 8 + 16) / 4.0;
    CHECK(to_double(t2.theta) >= expect);
    CHECK(to_double(t2.theta) == doctest::Approx(expect).epsilon(1e-15));
    CHECK(t2.p == 49);

    SolovaySpec geo_lit = geo;
    geo_lit.theta_mode = ThetaMode::SampledModulus;
    CHECK(theta_bound(geo_lit, 2).theta == 1);

    for (std::uint64_t k = 1; k <= 20; ++k)
        for (auto mode : {ThetaMode::Lipschitz, ThetaMode::SampledModulus}) {
            SolovaySpec s = k <= 6 ? geo : lin;
            s.theta_mode = mode;
            const auto t = theta_bound(s, k);
            REQUIRE(Rational(t.p) > t.theta);
        }
}

TEST_CASE("choose_a")
{
    CHECK(choose_a(rat(1, 2), 2) == 6);
    CHECK(choose_a(rat(1), 1) == 4);
    long prev = 0;
    for (long p = 1; p <= 300; ++p) {
        const long a = choose_a(rat(1, 2), p);
        REQUIRE(a >= prev);
        REQUIRE(pow2(-a) < rat(1, 16 * p));
        REQUIRE(pow2(-(a - 1)) >= rat(1, 16 * p));
        prev = a;
    }
}

TEST_CASE("grid samples")
{
    const SolovaySpec zero(FunctionFamily::parse("const:list=0"), 1, 1, rat(1, 2));
    const auto q = grid_samples(zero, 3, 5);
    CHECK(q.size() == 33);
    for (const auto& v : q)
        CHECK(abs(Rational(v - 1)) <= rat(1, 16));

    const SolovaySpec lin(FunctionFamily::parse("linear:n"), 1, 1, rat(1, 2));
    for (const auto& v : grid_samples(lin, 1, 6))
        CHECK(abs(Rational(v - 1)) <= rat(1, 16));

    // Against a direct double evaluation.
    const auto geo = doubling_spec();
    for (long i = 0; i <= 1024; i += 37) {
        const Rational q2 = grid_sample(geo, 2, 10, Integer(i));
        double re = 0, im = 0;
        for (int n = 1; n <= 4; ++n) {
            const double arg = 2 * M_PI * std::fmod(std::ldexp(double(i), n - 10), 1.0);
            re += std::cos(arg);
            im += std::sin(arg);
        }
        REQUIRE(std::abs(to_double(q2) - std::hypot(re, im) / 4) <= 1.0 / 16);
    }
    CHECK(code_of([&] { grid_samples(geo, 4, 20); }) == ErrorCode::GridTooLarge);
}

TEST_CASE("B_k construction")
{
    const SolovaySpec zero(FunctionFamily::parse("const:list=0"), 1, 1, rat(1, 2));
    const auto full = build_Bk(zero, 2);
    CHECK(full.p == 1);
    CHECK(full.a == 5);
    CHECK(full.X.size() == 33);
    CHECK(full.intervals == QIntervalSet::unit());

    const auto empty = build_Bk(cancelling_spec(), 2);
    CHECK(empty.X.empty());
    CHECK(empty.intervals.empty());

    const auto geo = doubling_spec();
    const auto b = build_Bk(geo, 2);
    CHECK(b.a == 10);
    CHECK(b.q.size() == 1025);
    CHECK(b.intervals.size() <= (1UL << b.a) + 1);
    CHECK(b.intervals.is_subset_of(QIntervalSet::unit()));
    for (std::uint64_t i : b.X)
        CHECK(b.q[i] > rat(3, 8));

    // The lazy view agrees with the materialized set.
    LazyBk lazy(geo, 2);
    CHECK(lazy.a() == b.a);
    Gen gen(111);
    for (int s = 0; s < 500; ++s) {
        const Rational t = gen.rational_in(0, 1, 1000003);
        REQUIRE(lazy.contains(t) == b.intervals.contains(t));
    }
}

TEST_CASE("sandwich property")
{
    const auto geo = doubling_spec();
    for (std::uint64_t k = 2; k <= 6; ++k) {
        const auto r = inclusion_check(geo, k, 300, 5);
        CHECK(r.samples == 300);
        CHECK(r.violations() == 0);
        CHECK(r.undecided == 0);
    }
    // Every sample point above eps lands in B_2; B_2 points stay above eps/2.
    const auto r = inclusion_check(geo, 2, 1000, 0);
    CHECK(r.above_eps > 0);
    CHECK(r.in_Bk >= r.above_eps);
}

TEST_CASE("mean value control")
{
    const auto geo = doubling_spec();
    Gen gen(112);
    for (std::uint64_t k : {2UL, 3UL}) {
        const auto p = theta_bound(geo, k).p;
        const auto seq_at = [&](const Rational& t) { return family_sequence(geo.family, RealOracle::rational(t)); };
        for (int s = 0; s < 100; ++s) {
            const Rational a = gen.rational_in(0, 1, 1 << 20);
            const Rational b = Rational(a + gen.rational_in(-1, 1, 1 << 20) / 1000);
            const auto sa = weyl_sum(seq_at(a), 1, k * k, 64);
            const auto sb = weyl_sum(seq_at(b), 1, k * k, 64);
            const ComplexBall d{sa.re - sb.re, sa.im - sb.im};
            REQUIRE(d.modulus_bounds(64).first <= Rational(p) * abs(Rational(a - b)));
        }
    }
}

TEST_CASE("measure bounds")
{
    const SolovaySpec s(FunctionFamily::parse("linear:n"), 1, 1, rat(1, 2));
    const Rational b5 = measure_bound(s, 5);
    CHECK(b5 >= 576 * ln_lower(5) / 25);
    CHECK(b5 <= 576 * ln_upper(5) / 25);
    CHECK(to_double(b5) == doctest::Approx(37.08).epsilon(1e-3));
    CHECK_THROWS_AS(measure_bound(s, 1), Error);

    const auto geo = doubling_spec();
    for (std::uint64_t k : {2UL, 3UL}) {
        const auto c = check_measure(geo, k);
        REQUIRE(c.measure);
        CHECK(c.holds);
        CHECK(*c.measure <= c.bound);
    }
    const auto big = check_measure(geo, 4);
    CHECK_FALSE(big.measure);
    CHECK(big.measure_upper == 1);
    CHECK(big.holds);
}

TEST_CASE("tail bounds")
{
    const SolovaySpec s(FunctionFamily::parse("linear:n"), 1, 1, rat(1, 2));
    CHECK(tail_sum_bound(s, 100) <= rat(323, 10));
    CHECK(tail_sum_bound(s, 100) >= 576 * (ln_lower(100) + 1) / 100);
    for (std::uint64_t L = 3; L < 300; ++L)
        REQUIRE(tail_sum_bound(s, L + 1) < tail_sum_bound(s, L));
    CHECK_THROWS_AS(tail_sum_bound(s, 2), Error);

    for (std::uint64_t L : {3UL, 10UL, 1000UL}) {
        const Rational lower_tail = s.alpha() * (ln_lower(Integer(static_cast<unsigned long>(L))) + 1) / L;
        CHECK(summed_term_bounds(s, L, 1000) <= lower_tail);
    }

    // Summation oracle on a family whose B_k are built exactly.
    const auto c = cancelling_spec();
    Rational window = 0;
    for (std::uint64_t k = 4; k <= 23; ++k)
        window += build_Bk(c, k).intervals.measure();
    CHECK(window <= tail_sum_bound(c, 3));
}

TEST_CASE("total measure")
{
    const auto c = cancelling_spec();
    const auto t3 = total_measure(c, tail_sum_bound(c, 3));
    CHECK(t3.L == 3);
    CHECK(t3.sum == 0);
    CHECK(t3.error <= tail_sum_bound(c, 3));
    const auto t6 = total_measure(c, tail_sum_bound(c, 6));
    CHECK(t6.L == 6);
    CHECK(t6.sum == 0);

    std::uint64_t prev = 0;
    for (Rational d = 1000; d > rat(1, 1000); d /= 2) {
        const auto L = choose_L(c, d);
        REQUIRE(L >= prev);
        REQUIRE(tail_sum_bound(c, L) <= d);
        if (L > 3)
            REQUIRE(tail_sum_bound(c, L - 1) > d);
        prev = L;
    }
    CHECK(code_of([] { total_measure(doubling_spec(), rat(1, 10)); }) == ErrorCode::GridTooLarge);
}

TEST_CASE("h scan")
{
    const auto r = scan_h(FunctionFamily::parse("linear:n"), 0, 2, 3);
    CHECK(r.lower > 1 - pow2(-19));
    const auto c = scan_h(FunctionFamily::parse("const:list=0,1/2"), 0, 1, 4);
    CHECK(c.k == 3);
    CHECK(c.lower <= rat(1, 9));
    CHECK(c.lower > rat(1, 9) - pow2(-19));
}
