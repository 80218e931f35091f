#include "test_support.hpp"

#include "udr/ergodic.hpp"
#include "udr/error.hpp"
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

// floor(2^g * frac(2^n (sqrt2 - 1))) from integer square roots.
Integer sqrt2m1_doubling_prefix(unsigned long n, unsigned long g)
{
    const unsigned long bits = n + g;
    Integer s;
    const Integer sq = Integer(2) * pow2_int(2 * bits);
    mpz_sqrt(s.get_mpz_t(), sq.get_mpz_t());
    // s = floor(sqrt2 * 2^bits); subtract 2^bits for sqrt2 - 1.
    const Integer v = s - pow2_int(bits);
    return v % pow2_int(g);
}

} // namespace

TEST_CASE("doubling orbits of rationals are exact")
{
    const auto third = doubling_orbit(OrbitSpec::doubling(RealOracle::rational(rat(1, 3)), 6, 64));
    for (std::size_t i = 0; i < third.size(); ++i) {
        REQUIRE(third[i].exact);
        CHECK(*third[i].exact == (i % 2 == 0 ? rat(1, 3) : rat(2, 3)));
        CHECK(third[i].ball.contains(*third[i].exact));
        CHECK(third[i].ball.radius_at_most(64));
    }
    const auto five = doubling_orbit(OrbitSpec::doubling(RealOracle::rational(rat(5, 8)), 6, 64));
    const std::vector<Rational> expect = {rat(5, 8), rat(1, 4), rat(1, 2), 0, 0, 0};
    for (std::size_t i = 0; i < expect.size(); ++i)
        CHECK(*five[i].exact == expect[i]);
    const auto shifted = doubling_orbit(OrbitSpec::doubling(RealOracle::rational(rat(5, 8)), 2, 64, 1));
    CHECK(*shifted[0].exact == rat(1, 4));
}

TEST_CASE("doubling orbit agrees bit-exactly with the geometric sequence")
{
    const auto x = RealOracle::parse("sqrt2m1");
    const long g = 64;
    const auto orbit = doubling_orbit(OrbitSpec::doubling(x, 64, g, 1));
    const auto seq = family_sequence(FunctionFamily::parse("geometric:t=2"), x);
    for (std::uint64_t i = 0; i < orbit.size(); ++i) {
        const std::uint64_t n = i + 1;
        REQUIRE(orbit[i].ball.radius_at_most(g));
        REQUIRE_FALSE(orbit[i].boundary);
        const auto a = g_bit_prefix(orbit[i], g);
        const auto b = g_bit_prefix(frac(seq(n, g + 32)), g);
        REQUIRE(a);
        REQUIRE(b);
        REQUIRE(*a == *b);
        REQUIRE(*a == sqrt2m1_doubling_prefix(static_cast<unsigned long>(n), g));
    }
    const auto third = doubling_orbit(OrbitSpec::doubling(RealOracle::rational(rat(1, 3)), 64, g, 1));
    const auto s3 = rational_sequence([](std::uint64_t n) { return frac_exact(Rational(rat(1, 3) * pow2(static_cast<long>(n)))); });
    for (std::uint64_t i = 0; i < third.size(); ++i)
        REQUIRE(*g_bit_prefix(third[i], g) == *g_bit_prefix(frac(s3(i + 1, g + 8)), g));
}

TEST_CASE("doubling fails fast on short digit files")
{
    std::vector<std::uint8_t> digits(100, 0);
    for (std::size_t i = 0; i < digits.size(); i += 3)
        digits[i] = 1;
    const auto x = RealOracle::from_digits(digits);
    CHECK(code_of([&] { doubling_orbit(OrbitSpec::doubling(x, 40, 64)); }) == ErrorCode::DigitFileExhausted);
    const auto ok = doubling_orbit(OrbitSpec::doubling(x, 30, 64));
    CHECK(ok.size() == 30);
    for (std::size_t i = 0; i < ok.size(); ++i)
        CHECK(ok[i].ball.radius_at_most(64));
}

TEST_CASE("doubling semigroup law")
{
    const auto x = RealOracle::parse("sqrt2m1");
    const auto full = doubling_orbit(OrbitSpec::doubling(x, 40, 80));
    for (std::uint64_t m : {0UL, 3UL, 17UL}) {
        const auto y = x.scaled(pow2_int(m)).shifted(Rational(-(x.query(200).mul_pow2(static_cast<long>(m)).center().floor())));
        const auto tail = doubling_orbit(OrbitSpec::doubling(y, 40 - m, 80));
        for (std::uint64_t n = 0; n < tail.size(); ++n)
            REQUIRE(full[m + n].ball.intersects(tail[n].ball));
    }
}

TEST_CASE("rotation orbits")
{
    const auto phi = RealOracle::golden_ratio();
    const auto orbit = rotation_orbit(OrbitSpec::rotation(RealOracle::rational(0), phi, 5, 64));
    for (std::uint64_t n = 1; n <= 5; ++n) {
        const Ball direct = frac(phi.scaled(Integer(static_cast<unsigned long>(n))).query(200));
        REQUIRE(orbit[n - 1].ball.radius_at_most(64));
        CHECK(orbit[n - 1].ball.intersects(direct));
    }
    CHECK(code_of([] { rotation_orbit(OrbitSpec::rotation(RealOracle::rational(0), RealOracle::rational(rat(1, 2)), 5, 64)); })
        == ErrorCode::RationalRotation);

    const auto file = RealOracle::from_digits(std::vector<std::uint8_t>(200, 1));
    auto spec = OrbitSpec::rotation(RealOracle::rational(0), file, 5, 64);
    CHECK(code_of([&] { rotation_orbit(spec); }) == ErrorCode::RationalRotation);
    spec.declared_irrational = true;
    CHECK(rotation_orbit(spec).size() == 5);

    const auto sqrt2 = RealOracle::sqrt(2);
    Ball prev;
    for (long g : {16L, 64L, 256L}) {
        const auto o = rotation_orbit(OrbitSpec::rotation(RealOracle::rational(rat(1, 4)), sqrt2, 1, g, 0));
        CHECK(o[0].ball.radius_at_most(g));
        if (g > 16)
            CHECK(o[0].ball.intersects(prev));
        prev = o[0].ball;
    }
    CHECK(prev.contains(Dyadic(Integer(1), -2)));
}

TEST_CASE("birkhoff frequencies")
{
    const QIntervalSet lower{QInterval(0, rat(1, 2))};
    const auto third = doubling_orbit(OrbitSpec::doubling(RealOracle::rational(rat(1, 3)), 100, 64));
    for (const auto& f : birkhoff_frequency(third, lower, {2, 10, 50, 100})) {
        CHECK(f.hits_min == f.hits_max);
        CHECK(f.frequency_min() == rat(1, 2));
    }
    for (const auto& f : birkhoff_frequency(third, QIntervalSet::unit(), {1, 7, 100}))
        CHECK(f.frequency_min() == 1);

    const auto golden = rotation_orbit(OrbitSpec::rotation(RealOracle::rational(0), RealOracle::golden_ratio(), 10000, 64));
    const auto f = birkhoff_frequency(golden, lower, {10000}).front();
    CHECK(f.hits_min == f.hits_max);
    long hits = 0;
    for (long n = 1; n <= 10000; ++n) {
        Integer s;
        const Integer r = Integer(5) * Integer(n) * Integer(n);
        mpz_sqrt(s.get_mpz_t(), r.get_mpz_t());
        hits += ((Integer(n) + s) % 2 == 0);
    }
    CHECK(static_cast<long>(f.hits_min) == hits);
    CHECK(abs(Rational(f.frequency_min() - rat(1, 2))) < rat(1, 100));

    // The rotation orbit is the frac(n a) sequence.
    const auto seq = family_sequence(FunctionFamily::parse("rotation:a=phi"), RealOracle::rational(0));
    const auto ud = empirical_ud(seq, {lower}, 10000);
    CHECK(ud.targets[0].hits_min == f.hits_min);

    CHECK_THROWS_AS(birkhoff_frequency(third, lower, {101}), Error);
    CHECK_THROWS_AS(birkhoff_frequency(third, QIntervalSet{QInterval(0, 2)}, {1}), Error);
}

TEST_CASE("doubling preserves Lebesgue measure empirically")
{
    Gen gen(91);
    const std::vector<QInterval> cells = {
        QInterval(0, rat(1, 3)), QInterval(rat(1, 5), rat(7, 10)), QInterval(rat(9, 10), 1)};
    const int S = 10000;
    std::vector<int> hits(cells.size(), 0);
    for (int i = 0; i < S; ++i) {
        const Rational u = gen.rational_in(0, 1, 1 << 30);
        const auto o = doubling_orbit(OrbitSpec::doubling(RealOracle::rational(u), 1, 32, 1));
        for (std::size_t c = 0; c < cells.size(); ++c)
            hits[c] += cells[c].contains(*o[0].exact);
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const double p = to_double(cells[c].length());
        const double sigma = std::sqrt(p * (1 - p) / S);
        CHECK(std::abs(hits[c] / double(S) - p) <= 3 * sigma);
    }
}

TEST_CASE("orbit csv")
{
    const auto o = doubling_orbit(OrbitSpec::doubling(RealOracle::rational(rat(5, 8)), 2, 16));
    const auto csv = orbit_csv(o, 0, 4);
    CHECK(csv.rfind("step,center,radius_exponent,boundary\n", 0) == 0);
    CHECK(csv.find("0,0.6250,exact,0") != std::string::npos);
    CHECK(csv.find("1,0.2500,exact,0") != std::string::npos);
}
