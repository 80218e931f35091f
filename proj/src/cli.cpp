#include "udr/cli.hpp"

#include "udr/ergodic.hpp"
#include "udr/families.hpp"
#include "udr/io.hpp"
#include "udr/sigma01.hpp"
#include "udr/solovay.hpp"
#include "udr/weyl.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace udr {

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::UnsupportedFamily:
    case ErrorCode::RationalRotation:
    case ErrorCode::PreconditionMeasure:
        return ExitUsage;
    case ErrorCode::StraddlesInteger:
    case ErrorCode::DigitFileExhausted:
    case ErrorCode::AmbiguousDigit:
    case ErrorCode::ZeroDigitsExhausted:
    case ErrorCode::NoTailBound:
    case ErrorCode::PrecisionUnreachable:
    case ErrorCode::GridTooLarge:
        return ExitPrecision;
    case ErrorCode::BoundViolated:
        return ExitViolation;
    }
    return ExitUsage;
}

namespace {

struct Globals {
    long precision = 128;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string out_path;
};

struct Output {
    Json json;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// Used verbatim instead of header/rows when set.
    std::string raw_csv;
    int code = ExitOk;
};

std::string dec(const Rational& x, int digits = 12)
{
    return to_decimal(x, digits);
}

std::string str(std::uint64_t v)
{
    return std::to_string(v);
}

Integer as_int(std::uint64_t v)
{
    return Integer(static_cast<unsigned long>(v));
}

Json header_json(const std::string& command, const Globals& g)
{
    Json j;
    j["command"] = command;
    j["precision"] = g.precision;
    j["seed"] = g.seed;
    return j;
}

// ---------------------------------------------------------------- weyl

struct WeylOpts {
    std::string seq = "geometric:t=2";
    std::string x = "sqrt2m1";
    std::string h = "1";
    std::string schedule = "full";
    std::uint64_t N = 100;
    std::uint64_t kmax = 10;
};

Json sum_json(std::uint64_t N, const ComplexBall& z, long g)
{
    const auto [lo, hi] = z.modulus_bounds(g);
    Json j;
    j["N"] = N;
    j["re"] = to_string(z.re.center().to_rational());
    j["im"] = to_string(z.im.center().to_rational());
    j["radius"] = to_string(max(z.re.radius(), z.im.radius()).to_rational());
    j["modulus_lower"] = to_string(lo);
    j["modulus_upper"] = to_string(hi);
    return j;
}

Output cmd_weyl(const Globals& g, const WeylOpts& o)
{
    const auto f = FunctionFamily::parse(o.seq);
    const auto x = RealOracle::parse(o.x);
    const Integer h = parse_integer(o.h);
    require(h != 0, "h must be nonzero");
    const Sequence seq = family_sequence(f, x);
    Output out;
    out.json = header_json("weyl", g);
    out.json["seq"] = f.describe();
    out.json["x"] = x.describe();
    out.json["h"] = h.get_str();
    out.json["schedule"] = o.schedule;
    if (o.schedule == "k2") {
        require(o.kmax >= 1, "kmax must be positive");
        const auto sched = subsequence_schedule(o.kmax);
        const auto series = weyl_series_full(seq, h, sched.back(), g.precision);
        const auto gap = gap_bound_check(series, sched);
        out.header = {"k", "M_k", "re", "im", "modulus_upper"};
        Json rows = Json::array();
        for (std::size_t k = 0; k < sched.size(); ++k) {
            const auto& z = series.at(sched[k]);
            Json r = sum_json(sched[k], z, g.precision);
            r["k"] = k + 1;
            rows.push_back(r);
            out.rows.push_back({str(k + 1), str(sched[k]), dec(z.re.center().to_rational()),
                dec(z.im.center().to_rational()), dec(z.modulus_bounds(g.precision).second)});
        }
        out.json["series"] = rows;
        Json gj;
        gj["checks"] = gap.checks;
        gj["blocks"] = gap.blocks;
        gj["violations"] = gap.violations;
        gj["min_slack"] = to_string(gap.min_slack);
        out.json["gap_check"] = gj;
        if (!gap.violations.empty())
            out.code = ExitViolation;
    } else if (o.schedule == "full") {
        require(o.N >= 1, "N must be at least 1");
        const auto series = weyl_series_full(seq, h, o.N, g.precision);
        out.header = {"N", "re", "im", "modulus_upper"};
        Json rows = Json::array();
        for (std::uint64_t N = 1; N <= o.N; ++N) {
            const auto& z = series.at(N);
            rows.push_back(sum_json(N, z, g.precision));
            out.rows.push_back({str(N), dec(z.re.center().to_rational()), dec(z.im.center().to_rational()),
                dec(z.modulus_bounds(g.precision).second)});
        }
        out.json["series"] = rows;
    } else {
        fail(ErrorCode::InvalidArgument, "schedule must be full or k2");
    }
    return out;
}

// ---------------------------------------------------------------- ud

struct UdOpts {
    std::string seq = "linear:n";
    std::string x = "sqrt2m1";
    std::uint64_t N = 1000;
    std::vector<std::string> targets;
    bool discrepancy = false;
};

Output cmd_ud(const Globals& g, const UdOpts& o)
{
    const auto f = FunctionFamily::parse(o.seq);
    const auto x = RealOracle::parse(o.x);
    std::vector<QIntervalSet> targets;
    for (const auto& t : o.targets)
        targets.push_back(parse_target(t));
    if (targets.empty())
        targets.push_back(QIntervalSet{QInterval(0, Rational(1, 2))});
    CountOptions opts;
    opts.precision_cap = std::max(opts.precision_cap, g.precision);
    opts.with_discrepancy = o.discrepancy;
    const auto r = empirical_ud(family_sequence(f, x), targets, o.N, opts);

    Output out;
    out.json = header_json("ud", g);
    out.json["seq"] = f.describe();
    out.json["x"] = x.describe();
    out.json["N"] = o.N;
    out.header = {"target", "measure", "hits_min", "hits_max", "frequency_min", "frequency_max"};
    Json ts = Json::array();
    for (std::size_t i = 0; i < r.targets.size(); ++i) {
        const auto& t = r.targets[i];
        Json j;
        j["target"] = to_json(t.target);
        j["hits_min"] = t.hits_min;
        j["hits_max"] = t.hits_max;
        j["frequency_min"] = to_string(t.frequency_min(o.N));
        j["frequency_max"] = to_string(t.frequency_max(o.N));
        j["deviation"] = to_string(t.deviation(o.N));
        ts.push_back(j);
        out.rows.push_back({str(i), dec(t.measure), str(t.hits_min), str(t.hits_max), dec(t.frequency_min(o.N)),
            dec(t.frequency_max(o.N))});
    }
    out.json["targets"] = ts;
    if (r.star_discrepancy) {
        out.json["star_discrepancy"] = {
            {"lower", to_string(r.star_discrepancy->first)}, {"upper", to_string(r.star_discrepancy->second)}};
    }
    return out;
}

// ---------------------------------------------------------------- koksma

struct KoksmaOpts {
    std::string family;
    std::string K = "1";
    std::uint64_t n_max = 32;
    std::uint64_t grid = 256;
};

Output cmd_koksma(const Globals& g, const KoksmaOpts& o)
{
    const auto f = FunctionFamily::parse(o.family);
    const auto r = koksma_check(f, parse_rational(o.K), o.n_max, o.grid);
    Output out;
    out.json = header_json("koksma", g);
    out.json["family"] = f.describe();
    out.json["K"] = to_string(r.claimed_K);
    out.json["n_max"] = o.n_max;
    out.json["method"] = to_string(r.method);
    out.json["verdict"] = to_string(r.verdict);
    out.json["checked_pairs"] = r.checked_pairs;
    out.header = {"family", "K", "verdict", "m", "n", "x", "gap"};
    std::vector<std::string> row = {f.describe(), to_string(r.claimed_K), to_string(r.verdict), "", "", "", ""};
    if (r.witness) {
        const auto& w = *r.witness;
        out.json["witness"] = {{"m", w.m}, {"n", w.n}, {"x", to_string(w.x)}, {"gap", to_string(w.gap)},
            {"monotonicity", w.monotonicity}};
        row = {f.describe(), to_string(r.claimed_K), to_string(r.verdict), str(w.m), str(w.n), to_string(w.x),
            to_string(w.gap)};
    } else {
        out.json["witness"] = nullptr;
    }
    out.rows.push_back(row);
    return out;
}

// ---------------------------------------------------------------- metric

struct MetricOpts {
    std::string family = "geometric:t=2";
    std::string K = "1";
    std::string h = "1";
    std::uint64_t N = 100;
    std::uint64_t samples = 10000;
    std::uint64_t chunk = 1024;
    std::string eps;
};

Output cmd_metric(const Globals& g, const MetricOpts& o)
{
    const auto f = FunctionFamily::parse(o.family);
    const Rational K = parse_rational(o.K);
    const Integer h = parse_integer(o.h);
    const auto r = metric_bound_mc(f, K, h, o.N, o.samples, g.seed, o.chunk);
    Output out;
    out.json = header_json("metric", g);
    out.json["family"] = f.describe();
    out.json["N"] = r.N;
    out.json["h"] = r.h.get_str();
    out.json["K"] = to_string(r.K);
    out.json["koksma_certified"] = r.koksma_certified;
    out.json["samples"] = r.samples;
    out.json["estimate"] = r.estimate;
    out.json["std_error"] = r.std_error;
    out.json["tight_bound"] = to_string(r.tight_bound);
    out.json["relaxed_bound"] = to_string(r.relaxed_bound);
    out.json["pass"] = r.pass;
    out.header = {"N", "h", "K", "samples", "estimate", "std_error", "tight_bound", "relaxed_bound", "pass"};
    out.rows.push_back({str(r.N), r.h.get_str(), to_string(r.K), str(r.samples), dec(Rational(r.estimate)),
        dec(Rational(r.std_error)), dec(r.tight_bound), dec(r.relaxed_bound), r.pass ? "1" : "0"});
    if (!o.eps.empty()) {
        const Rational eps = parse_rational(o.eps);
        out.json["eps"] = to_string(eps);
        out.json["chebyshev_tail"] = to_string(chebyshev_tail(eps, h, K, o.N));
    }
    if (!r.pass)
        out.code = ExitViolation;
    return out;
}

// ---------------------------------------------------------------- solovay

struct SolovayOpts {
    std::string family = "geometric:t=2";
    std::string K = "1";
    std::string h = "1";
    std::string eps = "1/2";
    std::string theta = "lipschitz";
    std::uint64_t kmin = 2;
    std::uint64_t kmax = 10;
    std::uint64_t inclusions = 0;
    long grid_cap = 16;
    std::string total_delta;
};

Output cmd_solovay(const Globals& g, const SolovayOpts& o)
{
    SolovaySpec spec(FunctionFamily::parse(o.family), parse_rational(o.K), parse_integer(o.h), parse_rational(o.eps));
    if (o.theta == "sampled")
        spec.theta_mode = ThetaMode::SampledModulus;
    else
        require(o.theta == "lipschitz", "theta must be lipschitz or sampled");
    spec.grid_cap_bits = o.grid_cap;
    require(o.kmin >= 2 && o.kmax >= o.kmin, "need 2 <= kmin <= kmax");

    Output out;
    out.json = header_json("solovay", g);
    out.json["family"] = spec.family.describe();
    out.json["K"] = to_string(spec.K);
    out.json["h"] = spec.h.get_str();
    out.json["eps"] = to_string(spec.eps);
    out.json["theta_mode"] = to_string(spec.theta_mode);
    out.json["alpha"] = to_string(spec.alpha());
    out.header = {"k", "a_k", "p_k_bits", "grid_built", "X_size", "measure_upper", "bound", "samples", "violations"};
    Json ks = Json::array();
    for (std::uint64_t k = o.kmin; k <= o.kmax; ++k) {
        const LazyBk lazy(spec, k);
        Json j;
        j["k"] = k;
        j["a_k"] = lazy.a();
        j["p_k"] = lazy.p().get_str();
        j["theta"] = dec(lazy.theta());
        std::string x_size = "";
        try {
            const auto c = check_measure(spec, k);
            j["grid_built"] = c.measure.has_value();
            if (c.measure) {
                const auto b = build_Bk(spec, k);
                j["X_size"] = b.X.size();
                x_size = str(b.X.size());
                j["measure"] = to_string(*c.measure);
            } else {
                j["measure"] = nullptr;
            }
            j["measure_upper"] = to_string(c.measure_upper);
            j["bound"] = to_string(c.bound);
            j["bound_holds"] = c.holds;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BoundViolated)
                throw;
            j["bound_violation"] = e.what();
            out.code = ExitViolation;
        }
        std::uint64_t violations = 0;
        if (o.inclusions > 0) {
            const auto r = inclusion_check(spec, k, o.inclusions, g.seed);
            violations = r.violations();
            j["inclusion_check"] = {{"samples", r.samples}, {"violations", violations}, {"lower_violations", r.lower_violations},
                {"upper_violations", r.upper_violations}, {"undecided", r.undecided}, {"in_Bk", r.in_Bk},
                {"above_eps", r.above_eps}};
            if (violations > 0)
                out.code = ExitViolation;
        }
        out.rows.push_back({str(k), std::to_string(lazy.a()), str(bit_length(lazy.p())),
            j.contains("grid_built") && j["grid_built"].get<bool>() ? "1" : "0", x_size,
            j.contains("measure_upper") ? j["measure_upper"].get<std::string>() : "", j.value("bound", std::string()),
            str(o.inclusions), str(violations)});
        ks.push_back(j);
    }
    out.json["per_k"] = ks;
    if (o.kmax >= 3)
        out.json["tail_bound"] = {{"L", o.kmax}, {"value", to_string(tail_sum_bound(spec, o.kmax))}};
    if (!o.total_delta.empty()) {
        const Rational delta = parse_rational(o.total_delta);
        const auto L = choose_L(spec, delta);
        Json t;
        t["delta"] = to_string(delta);
        t["L"] = L;
        try {
            const auto tm = total_measure(spec, delta);
            t["sum"] = to_string(tm.sum);
            t["error"] = to_string(tm.error);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::GridTooLarge)
                throw;
            t["error_code"] = std::string(to_string(e.code()));
            t["message"] = e.what();
            if (out.code == ExitOk)
                out.code = ExitPrecision;
        }
        out.json["total_measure"] = t;
    }
    return out;
}

// ---------------------------------------------------------------- witness

struct WitnessOpts {
    std::string test_file;
    std::string planted = "1/3";
    std::string family = "linear:n";
    std::string x;
    std::uint64_t stages = 12;
    std::uint64_t per_stage = 16;
    std::uint64_t p = 6;
    std::uint64_t q = 0;
    bool rescale = false;
};

Output cmd_witness(const Globals& g, const WitnessOpts& o)
{
    const auto f = FunctionFamily::parse(o.family);
    const LipschitzData ell = lipschitz_of(f);
    TestEnumeration test;
    std::string x_text = o.x;
    if (!o.test_file.empty()) {
        test = TestEnumeration::from_file(o.test_file);
        if (o.rescale)
            test = rescale(test, ell, std::min<std::uint64_t>(test.size(), 2 * o.p));
    } else {
        test = planted_test(parse_rational(o.planted), ell, o.stages, o.per_stage, g.seed);
        if (x_text.empty())
            x_text = o.planted;
    }
    require(o.p >= 1, "p must be positive");
    const std::uint64_t q = o.q ? o.q : choose_q(test, o.p);
    const auto om = build_omega(test, f, o.p, q);
    const auto z = approximate_Z(test, om);
    const auto w = witness_set(om);

    Output out;
    out.json = header_json("witness", g);
    out.json["family"] = f.describe();
    out.json["mode"] = to_string(test.mode);
    out.json["p"] = o.p;
    out.json["q"] = q;
    Json stages = Json::array();
    for (std::size_t i = 0; i < om.stage_measure.size(); ++i)
        stages.push_back({{"n", i + 1}, {"measure", to_string(om.stage_measure[i])}, {"budget", to_string(om.stage_budget[i])}});
    out.json["omega_stages"] = stages;
    out.json["omega_measure"] = to_string(om.omega.measure());
    Json zj;
    zj["pieces"] = z.piece_count;
    zj["intervals"] = z.Z.size();
    zj["max_intervals"] = 3 * o.p * q;
    zj["measure"] = to_string(z.Z.measure());
    zj["error"] = to_string(z.error);
    zj["approx1"] = to_string(z.approx1);
    zj["approx1_stated"] = to_string(z.approx1_stated);
    zj["approx2"] = to_string(z.approx2);
    zj["approx3"] = to_string(z.approx3);
    out.json["Z"] = zj;
    bool ok = om.omega.measure() <= Rational(1, 2) && z.piece_count <= 3 * o.p * q;
    if (test.size() >= 2 * o.p) {
        const auto big = build_omega(test, f, 2 * o.p, 2 * q);
        const Rational diff = abs(Rational(big.omega.measure() - z.Z.measure()));
        out.json["doubled"] = {{"p", 2 * o.p}, {"q", 2 * q}, {"measure", to_string(big.omega.measure())},
            {"difference", to_string(diff)}, {"within_error", diff <= z.error}};
        ok = ok && diff <= z.error;
    }
    out.json["witness"] = to_json(w);
    out.header = {"N", "hits", "frequency"};
    if (!x_text.empty()) {
        const auto x = RealOracle::parse(x_text);
        out.json["x"] = x.describe();
        const auto seq = family_sequence(f, x);
        Json hits = Json::array();
        for (std::uint64_t N = 1; N <= o.p; ++N) {
            const auto r = empirical_ud(seq, {w}, N);
            const auto& t = r.targets[0];
            hits.push_back({{"N", N}, {"hits_min", t.hits_min}, {"frequency_min", to_string(t.frequency_min(N))}});
            out.rows.push_back({str(N), str(t.hits_min), dec(t.frequency_min(N))});
            ok = ok && t.hits_min == N;
        }
        out.json["hits"] = hits;
    }
    out.json["ok"] = ok;
    if (!ok)
        out.code = ExitViolation;
    return out;
}

// ---------------------------------------------------------------- orbit

struct OrbitOpts {
    std::string map = "doubling";
    std::string x = "sqrt2m1";
    std::string a = "phi";
    bool declared = false;
    std::uint64_t N = 64;
    long first = -1;
    std::vector<std::string> targets;
    std::vector<std::uint64_t> prefixes;
};

Output cmd_orbit(const Globals& g, const OrbitOpts& o)
{
    OrbitSpec spec;
    const auto x = RealOracle::parse(o.x);
    if (o.map == "doubling") {
        spec = OrbitSpec::doubling(x, o.N, g.precision, o.first < 0 ? 0 : static_cast<std::uint64_t>(o.first));
    } else if (o.map == "rotation") {
        spec = OrbitSpec::rotation(x, RealOracle::parse(o.a), o.N, g.precision, o.first < 0 ? 1 : static_cast<std::uint64_t>(o.first));
        spec.declared_irrational = o.declared;
    } else {
        fail(ErrorCode::InvalidArgument, "map must be doubling or rotation");
    }
    const Orbit orbit = generate_orbit(spec);
    Output out;
    out.json = header_json("orbit", g);
    out.json["map"] = std::string(to_string(spec.map));
    out.json["x"] = x.describe();
    if (spec.angle)
        out.json["a"] = spec.angle->describe();
    out.json["first_index"] = spec.first_index;
    Json pts = Json::array();
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        const auto& p = orbit[i];
        Json j;
        j["step"] = spec.first_index + i;
        j["center"] = to_decimal(p.ball.center().to_rational(), 20);
        j["ball"] = to_json(p.ball);
        j["boundary"] = p.boundary;
        if (p.exact)
            j["exact"] = to_string(*p.exact);
        pts.push_back(j);
    }
    out.json["orbit"] = pts;
    out.raw_csv = orbit_csv(orbit, spec.first_index);
    std::vector<std::uint64_t> prefixes = o.prefixes;
    if (prefixes.empty())
        prefixes.push_back(o.N);
    Json bk = Json::array();
    for (const auto& t : o.targets) {
        const auto A = parse_target(t);
        Json j;
        j["target"] = to_json(A);
        Json fs = Json::array();
        for (const auto& f : birkhoff_frequency(orbit, A, prefixes))
            fs.push_back({{"N", f.N}, {"hits_min", f.hits_min}, {"hits_max", f.hits_max},
                {"frequency_min", to_string(f.frequency_min())}, {"frequency_max", to_string(f.frequency_max())}});
        j["frequencies"] = fs;
        bk.push_back(j);
    }
    out.json["birkhoff"] = bk;
    return out;
}

// ---------------------------------------------------------------- construct

struct ConstructOpts {
    std::string kind;
    std::string x = "sqrt2m1";
    std::string points;
    std::uint64_t count = 100;
    std::uint64_t p = 50;
};

Output cmd_construct(const Globals& g, const ConstructOpts& o)
{
    Output out;
    out.json = header_json("construct", g);
    out.json["kind"] = o.kind;
    if (o.kind == "prop15") {
        const auto x = RealOracle::parse(o.x);
        DigitOptions opts;
        opts.precision_cap = std::max<long>(opts.precision_cap, g.precision);
        const auto r = build_prop15_exponents(x, o.count, opts);
        out.json["x"] = x.describe();
        out.json["dyadic"] = r.dyadic;
        if (r.dyadic)
            out.json["dyadic_exponent"] = r.k;
        out.json["exponents"] = r.exponents;
        out.header = {"j", "a_j"};
        for (std::size_t j = 0; j < r.exponents.size(); ++j)
            out.rows.push_back({str(j + 1), str(r.exponents[j])});
    } else if (o.kind == "prop23") {
        const auto x = RealOracle::parse(o.x);
        const auto s = build_prop23_set(x, o.p);
        const auto& last = s.last();
        const Rational tail = s.tail_bound(o.p);
        out.json["x"] = x.describe();
        out.json["p"] = o.p;
        const Json set = to_json(last);
        out.json["intervals"] = set["intervals"];
        out.json["measure"] = set["measure"];
        out.json["tail_bound"] = to_string(tail);
        out.json["measure_plus_tail"] = to_string(Rational(last.measure() + tail));
        out.header = {"lo", "hi"};
        for (const auto& i : last.intervals())
            out.rows.push_back({to_string(i.lo), to_string(i.hi)});
    } else if (o.kind == "pitfall") {
        std::vector<Ball> pts;
        std::vector<std::string> names;
        if (!o.points.empty()) {
            std::stringstream ss(o.points);
            std::string item;
            std::size_t n = 0;
            while (std::getline(ss, item, ',')) {
                ++n;
                const auto r = RealOracle::parse(item);
                pts.push_back(r.query(static_cast<long>(n) + 8));
                names.push_back(r.describe());
            }
        } else {
            CounterRng rng(g.seed, 0);
            for (std::uint64_t n = 0; n < o.count; ++n) {
                const Rational v = Rational(rng.bits(32)) * pow2(-32);
                pts.push_back(Ball::from_rational(v, 64));
                names.push_back(to_string(v));
            }
        }
        const auto set = build_pitfall_set(pts, pts.size());
        out.json["points"] = names;
        const Json sj = to_json(set);
        out.json["intervals"] = sj["intervals"];
        out.json["measure"] = sj["measure"];
        out.json["tail_bound"] = "0";
        out.header = {"lo", "hi"};
        for (const auto& i : set.intervals())
            out.rows.push_back({to_string(i.lo), to_string(i.hi)});
    } else {
        fail(ErrorCode::InvalidArgument, "construct kind must be prop15, prop23 or pitfall");
    }
    return out;
}

void emit(const Output& o, const Globals& g, std::ostream& out)
{
    std::string text;
    if (g.format == "csv")
        text = o.raw_csv.empty() ? to_csv(o.header, o.rows) : o.raw_csv;
    else
        text = o.json.dump(2) + "\n";
    if (g.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(g.out_path);
    if (!f)
        fail(ErrorCode::InvalidArgument, "cannot write " + g.out_path);
    f << text;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Uniform distribution and randomness toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    // -h is taken by the --h multiplier option
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_config("--config", "", "key = value file; command line flags take precedence");

    Globals g;
    app.add_option("--precision", g.precision, "Working precision in bits")->check(CLI::Range(1L, 1L << 20));
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", g.out_path, "Write the report to a file");

    std::function<Output()> action;

    WeylOpts wo;
    auto* weyl = app.add_subcommand("weyl", "Weyl sums S_N and the k^2 gap check");
    weyl->add_option("--seq", wo.seq, "Function family");
    weyl->add_option("--x", wo.x, "Evaluation point");
    weyl->add_option("--h", wo.h, "Nonzero integer multiplier");
    weyl->add_option("--N", wo.N, "Largest N for the full schedule");
    weyl->add_option("--schedule", wo.schedule, "full or k2");
    weyl->add_option("--kmax", wo.kmax, "Largest k for the k2 schedule");
    weyl->callback([&] { action = [&] { return cmd_weyl(g, wo); }; });

    UdOpts uo;
    auto* ud = app.add_subcommand("ud", "Empirical hit frequencies of frac(u_n(x))");
    ud->add_option("--seq", uo.seq, "Function family");
    ud->add_option("--x", uo.x, "Evaluation point");
    ud->add_option("--N", uo.N, "Number of terms");
    ud->add_option("--target", uo.targets, "Target set: lo:hi[,lo:hi...] or @file.json");
    ud->add_flag("--discrepancy", uo.discrepancy, "Also enclose the star discrepancy");
    ud->callback([&] { action = [&] { return cmd_ud(g, uo); }; });

    KoksmaOpts ko;
    auto* koksma = app.add_subcommand("koksma", "Koksma classification of a family");
    koksma->add_option("--family", ko.family, "Function family")->required();
    koksma->add_option("--K", ko.K, "Claimed constant");
    koksma->add_option("--nmax", ko.n_max, "Indices checked");
    koksma->add_option("--grid", ko.grid, "Grid size for piecewise polynomials");
    koksma->callback([&] { action = [&] { return cmd_koksma(g, ko); }; });

    MetricOpts mo;
    auto* metric = app.add_subcommand("metric", "Monte Carlo estimate of the mean square Weyl sum");
    metric->add_option("--family", mo.family, "Function family");
    metric->add_option("--K", mo.K, "Koksma constant");
    metric->add_option("--h", mo.h, "Nonzero integer multiplier");
    metric->add_option("--N", mo.N, "Number of terms (>= 3)");
    metric->add_option("--samples", mo.samples, "Monte Carlo samples");
    metric->add_option("--chunk", mo.chunk, "Samples per seeded chunk");
    metric->add_option("--eps", mo.eps, "Also report the Chebyshev tail at eps");
    metric->callback([&] { action = [&] { return cmd_metric(g, mo); }; });

    SolovayOpts so;
    auto* solovay = app.add_subcommand("solovay", "Build B_k and check the measure and inclusion bounds");
    solovay->add_option("--family", so.family, "Function family");
    solovay->add_option("--K", so.K, "Koksma constant");
    solovay->add_option("--h", so.h, "Nonzero integer multiplier");
    solovay->add_option("--eps", so.eps, "Threshold in (0, 2]");
    solovay->add_option("--theta", so.theta, "lipschitz or sampled");
    solovay->add_option("--kmin", so.kmin, "First k (>= 2)");
    solovay->add_option("--kmax", so.kmax, "Last k");
    solovay->add_option("--check-inclusions", so.inclusions, "Sample points per k for the inclusion check");
    solovay->add_option("--grid-cap", so.grid_cap, "Largest a_k for which B_k is materialized");
    solovay->add_option("--total-delta", so.total_delta, "Also compute the total measure to this accuracy");
    solovay->callback([&] { action = [&] { return cmd_solovay(g, so); }; });

    WitnessOpts wi;
    auto* witness = app.add_subcommand("witness", "Omega prefix, Z and the witness set of a test");
    witness->add_option("--test", wi.test_file, "Test enumeration JSON");
    witness->add_option("--planted", wi.planted, "Planted rational point for a synthetic test");
    witness->add_option("--family", wi.family, "Function family");
    witness->add_option("--x", wi.x, "Point whose hits are counted");
    witness->add_option("--stages", wi.stages, "Stages of the synthetic test");
    witness->add_option("--per-stage", wi.per_stage, "Intervals per synthetic stage");
    witness->add_option("--p", wi.p, "Prefix length p");
    witness->add_option("--q", wi.q, "Intervals per stage q (default: least admissible)");
    witness->add_flag("--rescale", wi.rescale, "Extract stages meeting the measure budget");
    witness->callback([&] { action = [&] { return cmd_witness(g, wi); }; });

    OrbitOpts oo;
    auto* orbit = app.add_subcommand("orbit", "Doubling and rotation orbits with Birkhoff frequencies");
    orbit->add_option("--map", oo.map, "doubling or rotation");
    orbit->add_option("--x", oo.x, "Starting point");
    orbit->add_option("--a", oo.a, "Rotation angle");
    orbit->add_flag("--declared-irrational", oo.declared, "Assert the angle is irrational");
    orbit->add_option("--N", oo.N, "Orbit length");
    orbit->add_option("--first", oo.first, "Index of the first iterate (default 0 doubling, 1 rotation)");
    orbit->add_option("--target", oo.targets, "Target set for Birkhoff frequencies");
    orbit->add_option("--prefixes", oo.prefixes, "Prefix lengths for the frequencies")->delimiter(',');
    orbit->callback([&] { action = [&] { return cmd_orbit(g, oo); }; });

    ConstructOpts co;
    auto* construct = app.add_subcommand("construct", "prop15 exponents, prop23 cells or the pitfall set");
    construct->add_option("kind", co.kind, "prop15, prop23 or pitfall")->required();
    construct->add_option("--x", co.x, "Real number");
    construct->add_option("--points", co.points, "Comma-separated reals for the pitfall set");
    construct->add_option("--count", co.count, "Exponents (prop15) or random points (pitfall)");
    construct->add_option("--p", co.p, "Stages for prop23");
    construct->callback([&] { action = [&] { return cmd_construct(g, co); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return ExitUsage;
    }

    try {
        const Output o = action();
        emit(o, g, out);
        return o.code;
    } catch (const Error& e) {
        Json j;
        j["error"] = std::string(to_string(e.code()));
        j["message"] = e.what();
        err << j.dump() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        Json j;
        j["error"] = "INTERNAL";
        j["message"] = e.what();
        err << j.dump() << "\n";
        return ExitUsage;
    }
}

} // namespace udr
