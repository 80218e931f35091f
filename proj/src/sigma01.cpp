#include "udr/sigma01.hpp"

#include "udr/error.hpp"
#include "udr/weyl.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace udr {

std::string_view to_string(TestMode m)
{
    return m == TestMode::ML ? "ML" : "SCHNORR";
}

const TestStage& TestEnumeration::stage(std::uint64_t n) const
{
    require(n >= 1 && n <= stages.size(), "test has no stage " + std::to_string(n));
    return stages[n - 1];
}

Rational TestEnumeration::ell(std::uint64_t n) const
{
    require(n >= 1 && n <= lipschitz.size(), "no Lipschitz constant for n = " + std::to_string(n));
    return lipschitz[n - 1];
}

namespace {

Rational union_measure(const std::vector<QInterval>& J)
{
    return QIntervalSet(J).measure();
}

void validate(const TestEnumeration& t)
{
    for (std::size_t i = 0; i < t.stages.size(); ++i) {
        const auto& s = t.stages[i];
        require(s.n == i + 1, "stages must be numbered 1, 2, ...");
        Rational total = 0;
        for (const auto& J : s.J)
            total += J.length();
        require(total == union_measure(s.J), "intervals of stage " + std::to_string(s.n) + " overlap");
        require(s.measure >= total, "declared measure of stage " + std::to_string(s.n) + " is below its intervals");
    }
    require(t.lipschitz.size() >= t.stages.size(), "missing Lipschitz constants");
    for (const auto& l : t.lipschitz)
        require(l > 0, "Lipschitz constants must be positive");
}

Rational parse_field(const nlohmann::json& v)
{
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(Integer(static_cast<long>(v.get<long long>())));
    fail(ErrorCode::ParseError, "expected a rational string, got " + v.dump());
}

} // namespace

TestEnumeration TestEnumeration::from_raw(const std::vector<std::vector<QInterval>>& raw, std::vector<Rational> lipschitz,
    TestMode mode)
{
    TestEnumeration t;
    t.mode = mode;
    t.lipschitz = std::move(lipschitz);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        TestStage s;
        s.n = i + 1;
        s.source_index = i + 1;
        s.J = disjointify(raw[i]);
        s.measure = union_measure(s.J);
        t.stages.push_back(std::move(s));
    }
    validate(t);
    return t;
}

TestEnumeration TestEnumeration::from_json(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("test enumeration: ") + e.what());
    }
    try {
        TestEnumeration t;
        const std::string mode = doc.value("mode", std::string("SCHNORR"));
        if (mode == "ML")
            t.mode = TestMode::ML;
        else if (mode == "SCHNORR")
            t.mode = TestMode::Schnorr;
        else
            fail(ErrorCode::ParseError, "unknown test mode " + mode);
        for (const auto& l : doc.at("lipschitz"))
            t.lipschitz.push_back(parse_field(l));
        std::uint64_t expect = 1;
        for (const auto& st : doc.at("stages")) {
            TestStage s;
            s.n = st.value("n", expect);
            if (s.n != expect)
                fail(ErrorCode::ParseError, "stages must be numbered 1, 2, ...");
            s.source_index = s.n;
            std::vector<QInterval> raw;
            for (const auto& iv : st.at("intervals")) {
                if (iv.is_array())
                    raw.emplace_back(parse_field(iv.at(0)), parse_field(iv.at(1)));
                else
                    raw.emplace_back(parse_field(iv.at("lo")), parse_field(iv.at("hi")));
            }
            s.J = disjointify(raw);
            s.measure = st.contains("measure") ? parse_field(st.at("measure")) : union_measure(s.J);
            t.stages.push_back(std::move(s));
            ++expect;
        }
        validate(t);
        return t;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("test enumeration: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument)
            fail(ErrorCode::ParseError, e.what());
        throw;
    }
}

TestEnumeration TestEnumeration::from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

TestEnumeration rescale(const TestEnumeration& source, const LipschitzData& ell, std::uint64_t count)
{
    TestEnumeration out;
    out.mode = source.mode;
    std::size_t next = 0;
    for (std::uint64_t n = 1; n <= count; ++n) {
        const Rational l = ell(n);
        const Rational budget = pow2(-static_cast<long>(n) - 3) / l;
        while (next < source.stages.size() && source.stages[next].measure > budget)
            ++next;
        if (next == source.stages.size())
            fail(ErrorCode::PreconditionMeasure, "no source stage meets the budget of stage " + std::to_string(n));
        TestStage s = source.stages[next++];
        s.n = n;
        out.stages.push_back(std::move(s));
        out.lipschitz.push_back(l);
    }
    return out;
}

TestEnumeration planted_test(const Rational& x, const LipschitzData& ell, std::uint64_t stages, std::uint64_t per_stage,
    std::uint64_t seed)
{
    require(x >= 0 && x < 1, "planted point must lie in [0,1)");
    require(per_stage >= 1, "need at least one interval per stage");
    std::vector<std::vector<QInterval>> raw;
    std::vector<Rational> ls;
    for (std::uint64_t n = 1; n <= stages; ++n) {
        const Rational l = ell(n);
        ls.push_back(l);
        CounterRng rng(seed, n);
        std::vector<QInterval> I;
        const Rational w0 = pow2(-static_cast<long>(n) - 5) / l;
        I.emplace_back(std::max(Rational(0), Rational(x - w0 / 2)), std::min(Rational(1), Rational(x + w0 / 2)));
        for (std::uint64_t k = 1; k < per_stage; ++k) {
            const Rational w = pow2(-static_cast<long>(n + 5 + 2 * k)) / l;
            const Rational lo = Rational(rng.bits(32)) * pow2(-32) * (1 - w);
            I.emplace_back(lo, lo + w);
        }
        raw.push_back(std::move(I));
    }
    return TestEnumeration::from_raw(raw, std::move(ls));
}

ImageBounds image_interval(const FunctionFamily& f, std::uint64_t n, const QInterval& J, long g)
{
    require(n >= 1, "n is 1-based");
    const Rational& lo = J.lo;
    const Rational& hi = J.hi;
    return std::visit(
        [&](const auto& kind) -> ImageBounds {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, FunctionFamily::Linear>) {
                const Rational a(kind.a.at(n));
                const Rational u = a * lo, v = a * hi;
                return {std::min(u, v), std::max(u, v)};
            } else if constexpr (std::is_same_v<T, FunctionFamily::Geometric>) {
                const Rational tn = pow(kind.t, static_cast<unsigned long>(n));
                return {Rational(tn * lo), Rational(tn * hi)};
            } else if constexpr (std::is_same_v<T, FunctionFamily::Rotation>) {
                const Integer nn(static_cast<unsigned long>(n));
                const Ball a = kind.a.query(g + 1 + static_cast<long>(bit_length(nn)));
                const Rational na_lo = Rational(nn) * a.lower().to_rational();
                const Rational na_hi = Rational(nn) * a.upper().to_rational();
                return {Rational(lo + na_lo), Rational(hi + na_hi)};
            } else if constexpr (std::is_same_v<T, FunctionFamily::PowerMap>) {
                const auto e = static_cast<unsigned long>(n);
                const Rational u = pow(lo, e), v = pow(hi, e);
                if (lo < 0 && hi > 0 && e % 2 == 0)
                    return {Rational(0), std::max(u, v)};
                return {std::min(u, v), std::max(u, v)};
            } else {
                fail(ErrorCode::UnsupportedFamily, "image intervals need a built-in family");
            }
        },
        f.kind());
}

OmegaPrefix build_omega(const TestEnumeration& test, const FunctionFamily& f, std::uint64_t p, std::uint64_t q)
{
    require(p >= 1 && q >= 1, "p and q must be positive");
    require(test.size() >= p, "test has fewer than p stages");
    OmegaPrefix out;
    out.p = p;
    out.q = q;
    std::vector<QInterval> all;
    for (std::uint64_t n = 1; n <= p; ++n) {
        const auto& st = test.stage(n);
        const Rational l = test.ell(n);
        const Rational budget = pow2(-static_cast<long>(n) - 3) / l;
        if (st.measure > budget)
            fail(ErrorCode::PreconditionMeasure, "measure(V_" + std::to_string(n) + ") = " + to_string(st.measure)
                    + " exceeds 2^{-n-3}/l_n = " + to_string(budget));
        const long g = static_cast<long>(n + q) + 40;
        std::vector<QInterval> images, omegas;
        Rational pads = 0;
        for (std::uint64_t k = 0; k < q && k < st.J.size(); ++k) {
            OmegaEntry e;
            e.n = n;
            e.k = k;
            e.J = st.J[k];
            const auto b = image_interval(f, n, e.J, g);
            e.alpha = b.alpha;
            e.beta = b.beta;
            e.pad = pow2(-static_cast<long>(n + k) - 5);
            pads += 2 * e.pad;
            images.push_back(e.image());
            omegas.push_back(e.omega());
            out.entries.push_back(std::move(e));
        }
        const Rational m = QIntervalSet(omegas).measure();
        const Rational chain = QIntervalSet(images).measure() + pads;
        const Rational cap = pow2(-static_cast<long>(n) - 2);
        if (m > chain || chain > cap)
            fail(ErrorCode::BoundViolated, "measure chain fails at n = " + std::to_string(n) + ": " + to_string(m)
                    + " <= " + to_string(chain) + " <= " + to_string(cap));
        out.stage_measure.push_back(m);
        out.stage_budget.push_back(cap);
        all.insert(all.end(), omegas.begin(), omegas.end());
    }
    out.omega = QIntervalSet(all);
    if (out.omega.measure() > Rational(1, 2))
        fail(ErrorCode::BoundViolated, "measure of the Omega prefix exceeds 1/2");
    return out;
}

std::uint64_t choose_q(const TestEnumeration& test, std::uint64_t p)
{
    require(test.size() >= p, "test has fewer than p stages");
    std::uint64_t q = p;
    for (std::uint64_t n = 1; n <= p; ++n) {
        const auto& st = test.stage(n);
        const Rational tol = pow2(-static_cast<long>(n + p) - 3) / test.ell(n);
        Rational covered = 0;
        std::uint64_t k = 0;
        while (st.measure - covered > tol) {
            if (k == st.J.size())
                fail(ErrorCode::PreconditionMeasure, "listed intervals of V_" + std::to_string(n)
                        + " do not reach its declared measure");
            covered += st.J[k++].length();
        }
        q = std::max(q, k);
    }
    return q;
}

ZApproximation approximate_Z(const TestEnumeration& test, const OmegaPrefix& omega)
{
    const std::uint64_t p = omega.p, q = omega.q;
    require(q >= p, "Z needs q >= p");
    if (choose_q(test, p) > q)
        fail(ErrorCode::PreconditionMeasure, "q = " + std::to_string(q) + " is too small for the measure tolerance");
    ZApproximation z;
    std::vector<QInterval> pieces;
    for (const auto& e : omega.entries) {
        pieces.push_back(e.image());
        pieces.push_back(e.left_flank());
        pieces.push_back(e.right_flank());
    }
    z.piece_count = pieces.size();
    z.Z = QIntervalSet(pieces);
    const long pl = static_cast<long>(p), ql = static_cast<long>(q);
    z.approx1 = pow2(-pl - 1);
    z.approx1_stated = pow2(-pl - 3);
    z.approx2 = pow2(-pl - 2);
    z.approx3 = pow2(-ql - 2);
    z.error = z.approx1 + z.approx2 + z.approx3;
    return z;
}

QIntervalSet witness_set(const OmegaPrefix& omega)
{
    return frac_project(omega.omega);
}

Sigma01Prefix omega_sigma01(const TestEnumeration& test, const FunctionFamily& f, std::uint64_t stages)
{
    std::vector<QIntervalSet> sets;
    std::vector<Rational> errors;
    for (std::uint64_t j = 1; j <= stages; ++j) {
        const auto om = build_omega(test, f, j, choose_q(test, j));
        const auto z = approximate_Z(test, om);
        sets.push_back(z.Z);
        errors.push_back(z.error);
    }
    return Sigma01Prefix(std::move(sets), [errors](std::size_t k) -> Rational {
        require(k >= 1 && k <= errors.size(), "stage out of range");
        return errors[k - 1];
    });
}

} // namespace udr
