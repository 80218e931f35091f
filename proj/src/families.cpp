#include "udr/families.hpp"

#include "udr/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

namespace udr {

namespace {

// Sieve of Eratosthenes, rerun at double size when more primes are needed.
const std::vector<Integer>& primes_up_to_count(std::uint64_t count)
{
    static std::mutex mu;
    static std::vector<Integer> primes;
    std::lock_guard<std::mutex> lock(mu);
    std::uint64_t limit = 64;
    while (primes.size() < count) {
        limit *= 2;
        std::vector<bool> composite(limit + 1, false);
        primes.clear();
        for (std::uint64_t i = 2; i <= limit; ++i) {
            if (composite[i])
                continue;
            primes.emplace_back(static_cast<unsigned long>(i));
            for (std::uint64_t j = i * i; j <= limit; j += i)
                composite[j] = true;
        }
    }
    return primes;
}

Ball ball_of(const Rational& v, long g)
{
    return Ball::from_rational(v, g);
}

Rational rational_pow(const Rational& t, std::uint64_t n)
{
    return pow(t, static_cast<unsigned long>(n));
}

std::string trim_copy(std::string s)
{
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<Rational> parse_rational_list(const std::string& text)
{
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_rational(trim_copy(item)));
    return out;
}

IntSequence parse_affine(const std::string& text)
{
    // c*n + d, written "n", "2n+1", "3n-2", "-n+10".
    const auto pos = text.find('n');
    if (pos == std::string::npos || text.find('n', pos + 1) != std::string::npos)
        fail(ErrorCode::ParseError, "linear sequence '" + text + "': expected an expression in n");
    std::string cs = text.substr(0, pos);
    if (!cs.empty() && cs.back() == '*')
        cs.pop_back();
    Integer c = 1;
    if (cs == "-")
        c = -1;
    else if (!cs.empty() && cs != "+")
        c = parse_integer(cs);
    Integer d = 0;
    const std::string ds = text.substr(pos + 1);
    if (!ds.empty()) {
        if (ds[0] != '+' && ds[0] != '-')
            fail(ErrorCode::ParseError, "linear sequence '" + text + "': bad constant term");
        d = parse_integer(ds[0] == '+' ? ds.substr(1) : ds);
    }
    return IntSequence::affine(c, d);
}

std::vector<PolyPiece> parse_pieces(const nlohmann::json& j)
{
    std::vector<PolyPiece> pieces;
    for (const auto& p : j) {
        PolyPiece piece;
        piece.lo = parse_rational(p.at("lo").get<std::string>());
        piece.hi = parse_rational(p.at("hi").get<std::string>());
        for (const auto& c : p.at("coeffs"))
            piece.poly.coeffs.push_back(parse_rational(c.get<std::string>()));
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

FunctionFamily parse_poly_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::ParseError, "cannot open polynomial family file " + path);
    try {
        const auto j = nlohmann::json::parse(in);
        std::vector<std::vector<PolyPiece>> functions;
        for (const auto& f : j.at("functions"))
            functions.push_back(parse_pieces(f));
        return FunctionFamily::piecewise(std::move(functions), j.value("cyclic", false));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, path + ": " + e.what());
    }
}

} // namespace

IntSequence IntSequence::affine(const Integer& c, const Integer& d)
{
    require(c != 0, "linear sequence c*n+d needs c != 0 (terms must be distinct)");
    IntSequence s;
    s.kind_ = Kind::Affine;
    s.c_ = c;
    s.d_ = d;
    return s;
}

IntSequence IntSequence::list(std::vector<Integer> values)
{
    require(!values.empty(), "linear sequence list is empty");
    std::vector<Integer> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
        "linear sequence list has repeated values");
    IntSequence s;
    s.kind_ = Kind::List;
    s.values_ = std::make_shared<const std::vector<Integer>>(std::move(values));
    return s;
}

IntSequence IntSequence::primes()
{
    IntSequence s;
    s.kind_ = Kind::Primes;
    return s;
}

Integer IntSequence::at(std::uint64_t n) const
{
    require(n >= 1, "sequence index starts at 1");
    switch (kind_) {
    case Kind::Affine: return c_ * Integer(static_cast<unsigned long>(n)) + d_;
    case Kind::List:
        require(n <= values_->size(), "sequence index beyond list length");
        return (*values_)[n - 1];
    case Kind::Primes: return primes_up_to_count(n)[n - 1];
    }
    return 0;
}

std::optional<std::uint64_t> IntSequence::length() const
{
    if (kind_ == Kind::List)
        return values_->size();
    return std::nullopt;
}

Integer IntSequence::min_gap(std::uint64_t n_max) const
{
    const std::uint64_t n = length() ? std::min(n_max, *length()) : n_max;
    require(n >= 2, "min_gap needs at least two terms");
    if (kind_ == Kind::Affine)
        return c_ < 0 ? Integer(-c_) : c_;
    std::vector<Integer> v;
    for (std::uint64_t i = 1; i <= n; ++i)
        v.push_back(at(i));
    std::sort(v.begin(), v.end());
    Integer best = v[1] - v[0];
    for (std::size_t i = 2; i < v.size(); ++i)
        best = std::min<Integer>(best, v[i] - v[i - 1]);
    return best;
}

std::string IntSequence::describe() const
{
    switch (kind_) {
    case Kind::Affine: {
        std::string s = c_ == 1 ? "n" : c_.get_str() + "n";
        if (d_ > 0)
            s += "+" + d_.get_str();
        else if (d_ < 0)
            s += d_.get_str();
        return s;
    }
    case Kind::List: {
        std::string s = "list=";
        for (std::size_t i = 0; i < values_->size(); ++i)
            s += (i ? "," : "") + (*values_)[i].get_str();
        return s;
    }
    case Kind::Primes: return "primes";
    }
    return "";
}

Rational Polynomial::eval(const Rational& x) const
{
    Rational r = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        r = r * x + *it;
    return r;
}

Ball Polynomial::eval(const Ball& x, long g) const
{
    const long w = g + 8;
    Ball r;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        r = (r * x + ball_of(*it, w)).trim(w);
    return r;
}

Polynomial Polynomial::derivative() const
{
    Polynomial d;
    for (std::size_t i = 1; i < coeffs.size(); ++i)
        d.coeffs.push_back(coeffs[i] * static_cast<long>(i));
    return d;
}

Rational Polynomial::abs_sum() const
{
    Rational s = 0;
    for (const auto& c : coeffs)
        s += abs(c);
    return s;
}

FunctionFamily::FunctionFamily(Kind kind) : kind_(std::move(kind))
{
    if (const auto* p = std::get_if<PiecewisePoly>(&kind_)) {
        require(!p->functions.empty(), "piecewise family needs at least one function");
        for (const auto& f : p->functions) {
            require(!f.empty(), "piecewise function needs at least one piece");
            for (std::size_t i = 0; i < f.size(); ++i) {
                require(f[i].lo < f[i].hi, "piecewise function: empty piece");
                require(i == 0 || f[i - 1].hi == f[i].lo, "piecewise function: pieces must be contiguous");
            }
        }
    }
}

FunctionFamily FunctionFamily::geometric(const Rational& t)
{
    require(t > 1, "geometric family needs t > 1");
    return FunctionFamily(Geometric{t});
}

FunctionFamily FunctionFamily::piecewise(std::vector<std::vector<PolyPiece>> functions, bool cyclic)
{
    return FunctionFamily(PiecewisePoly{std::move(functions), cyclic});
}

FunctionFamily FunctionFamily::constants(const std::vector<Rational>& values)
{
    std::vector<std::vector<PolyPiece>> functions;
    for (const auto& v : values)
        functions.push_back({PolyPiece{0, 1, Polynomial{{v}}}});
    return piecewise(std::move(functions), true);
}

FunctionFamily FunctionFamily::parse(const std::string& raw)
{
    const std::string spec = trim_copy(raw);
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    auto value_of = [&](const std::string& key) -> std::string {
        if (body.rfind(key + "=", 0) != 0)
            fail(ErrorCode::ParseError, "family '" + spec + "': expected " + key + "=...");
        return body.substr(key.size() + 1);
    };
    if (head == "power" && body.empty())
        return power();
    if (head == "linear") {
        if (body == "primes")
            return linear(IntSequence::primes());
        if (body.rfind("list=", 0) == 0) {
            std::vector<Integer> values;
            for (const auto& v : parse_rational_list(value_of("list"))) {
                if (v.get_den() != 1)
                    fail(ErrorCode::ParseError, "linear list entries must be integers");
                values.push_back(v.get_num());
            }
            return linear(IntSequence::list(std::move(values)));
        }
        return linear(parse_affine(body));
    }
    if (head == "geometric")
        return geometric(parse_rational(value_of("t")));
    if (head == "rotation")
        return rotation(RealOracle::parse(value_of("a")));
    if (head == "poly")
        return parse_poly_file(value_of("file"));
    if (head == "const")
        return constants(parse_rational_list(value_of("list")));
    fail(ErrorCode::ParseError, "unknown family spec '" + spec + "'");
}

std::optional<std::uint64_t> FunctionFamily::length() const
{
    if (const auto* l = std::get_if<Linear>(&kind_))
        return l->a.length();
    if (const auto* p = std::get_if<PiecewisePoly>(&kind_))
        if (!p->cyclic)
            return p->functions.size();
    return std::nullopt;
}

std::string FunctionFamily::describe() const
{
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Linear>)
                return "linear:" + k.a.describe();
            else if constexpr (std::is_same_v<T, Geometric>)
                return "geometric:t=" + to_string(k.t);
            else if constexpr (std::is_same_v<T, Rotation>)
                return "rotation:a=" + k.a.describe();
            else if constexpr (std::is_same_v<T, PowerMap>)
                return "power";
            else
                return "poly:" + std::to_string(k.functions.size()) + (k.cyclic ? " cyclic" : "");
        },
        kind_);
}

const std::vector<PolyPiece>& FunctionFamily::pieces(std::uint64_t n) const
{
    const auto& p = std::get<PiecewisePoly>(kind_);
    require(n >= 1, "family index starts at 1");
    if (p.cyclic)
        return p.functions[(n - 1) % p.functions.size()];
    require(n <= p.functions.size(), "family index beyond the defined functions");
    return p.functions[n - 1];
}

namespace {

// Evaluate on every piece whose closure meets the ball and take the hull.
Ball eval_pieces(const std::vector<PolyPiece>& pieces, const Ball& x, long g, bool derivative)
{
    const Rational lo = x.lower().to_rational();
    const Rational hi = x.upper().to_rational();
    std::optional<Ball> out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        const bool first = i == 0;
        const bool last = i + 1 == pieces.size();
        if (!first && hi < p.lo)
            continue;
        if (!last && lo >= p.hi)
            continue;
        const Polynomial poly = derivative ? p.poly.derivative() : p.poly;
        const Ball v = poly.eval(x, g);
        out = out ? Ball::hull(*out, v) : v;
    }
    require(out.has_value(), "piecewise evaluation outside the pieces");
    return *out;
}

Ball power_ball(const Ball& x, std::uint64_t n, long w)
{
    Ball result(Dyadic(1));
    Ball base = x;
    while (n > 0) {
        if (n & 1)
            result = (result * base).trim(w);
        n >>= 1;
        if (n > 0)
            base = base.square().trim(w);
    }
    return result;
}

} // namespace

Ball FunctionFamily::eval(std::uint64_t n, const Ball& x, long g) const
{
    require(n >= 1, "family index starts at 1");
    const long w = g + 2;
    return std::visit(
        [&](const auto& k) -> Ball {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Linear>) {
                return (Ball(Dyadic(k.a.at(n))) * x).trim(w);
            } else if constexpr (std::is_same_v<T, Geometric>) {
                const Rational tn = rational_pow(k.t, n);
                const long extra = static_cast<long>(bit_length(x.mag().ceil())) + 2;
                return (ball_of(tn, w + extra) * x).trim(w);
            } else if constexpr (std::is_same_v<T, Rotation>) {
                const Integer nn(static_cast<unsigned long>(n));
                const long extra = static_cast<long>(bit_length(nn)) + 2;
                return (k.a.query(w + extra) * Ball(Dyadic(nn)) + x).trim(w);
            } else if constexpr (std::is_same_v<T, PowerMap>) {
                const long extra = 2 * static_cast<long>(bit_length(Integer(static_cast<unsigned long>(n)))) + 4;
                return power_ball(x, n, w + extra).trim(w);
            } else {
                return eval_pieces(pieces(n), x, w, false).trim(w);
            }
        },
        kind_);
}

Ball FunctionFamily::deriv(std::uint64_t n, const Ball& x, long g) const
{
    require(n >= 1, "family index starts at 1");
    const long w = g + 2;
    return std::visit(
        [&](const auto& k) -> Ball {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Linear>) {
                return Ball(Dyadic(k.a.at(n)));
            } else if constexpr (std::is_same_v<T, Geometric>) {
                return ball_of(rational_pow(k.t, n), w).trim(w);
            } else if constexpr (std::is_same_v<T, Rotation>) {
                return Ball(Dyadic(1));
            } else if constexpr (std::is_same_v<T, PowerMap>) {
                const Integer nn(static_cast<unsigned long>(n));
                const long extra = 2 * static_cast<long>(bit_length(nn)) + 4;
                return (Ball(Dyadic(nn)) * power_ball(x, n - 1, w + extra)).trim(w);
            } else {
                return eval_pieces(pieces(n), x, w, true).trim(w);
            }
        },
        kind_);
}

Rational FunctionFamily::deriv_sup(std::uint64_t n) const
{
    require(n >= 1, "family index starts at 1");
    return std::visit(
        [&](const auto& k) -> Rational {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Linear>) {
                return abs(Rational(k.a.at(n)));
            } else if constexpr (std::is_same_v<T, Geometric>) {
                return rational_pow(k.t, n);
            } else if constexpr (std::is_same_v<T, Rotation>) {
                return Rational(1);
            } else if constexpr (std::is_same_v<T, PowerMap>) {
                return Rational(Integer(static_cast<unsigned long>(n)));
            } else {
                Rational best = 0;
                for (const auto& p : pieces(n))
                    best = std::max(best, p.poly.derivative().abs_sum());
                return best;
            }
        },
        kind_);
}

Rational FunctionFamily::deriv2_bound(std::uint64_t n) const
{
    require(n >= 1, "family index starts at 1");
    if (std::holds_alternative<PowerMap>(kind_)) {
        const Integer nn(static_cast<unsigned long>(n));
        return Rational(nn * (nn - 1));
    }
    if (std::holds_alternative<PiecewisePoly>(kind_)) {
        Rational best = 0;
        for (const auto& p : pieces(n))
            best = std::max(best, p.poly.derivative().derivative().abs_sum());
        return best;
    }
    // Linear, geometric and rotation members are affine in x.
    return 0;
}

Ball FunctionFamily::term(std::uint64_t n, const RealOracle& x, long g, long cap) const
{
    const Integer lip = ceil(deriv_sup(n)) + 1;
    long w = g + 4 + static_cast<long>(bit_length(lip));
    for (;;) {
        if (w > cap)
            fail(ErrorCode::PrecisionUnreachable,
                "u_" + std::to_string(n) + "(x) to 2^-" + std::to_string(g) + " needs more than " + std::to_string(cap)
                    + " bits");
        const Ball b = eval(n, x.query(w), w);
        if (b.radius_at_most(g))
            return b;
        w += (w - g) + 8;
    }
}

Sequence family_sequence(const FunctionFamily& f, const RealOracle& x)
{
    return [f, x](std::uint64_t n, long g) { return f.term(n, x, g); };
}

Sequence rational_sequence(std::function<Rational(std::uint64_t)> value)
{
    return [value = std::move(value)](std::uint64_t n, long g) { return Ball::from_rational(value(n), g); };
}

Sequence scaled_sequence(Sequence s, const Integer& h)
{
    const long extra = static_cast<long>(bit_length(h)) + 2;
    return [s = std::move(s), h, extra](std::uint64_t n, long g) {
        return (s(n, g + extra) * Ball(Dyadic(h))).trim(g + 2);
    };
}

const char* to_string(KoksmaVerdict v)
{
    switch (v) {
    case KoksmaVerdict::Certified: return "CERTIFIED";
    case KoksmaVerdict::Refuted: return "REFUTED";
    case KoksmaVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

const char* to_string(KoksmaMethod m)
{
    return m == KoksmaMethod::Symbolic ? "symbolic" : "grid";
}

namespace {

std::uint64_t pair_count(std::uint64_t n)
{
    return n * (n - 1) / 2;
}

// Exact derivative of a piecewise member at a rational point.
Rational poly_deriv_at(const std::vector<PolyPiece>& pieces, const Rational& x)
{
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const bool last = i + 1 == pieces.size();
        if (pieces[i].lo <= x && (x < pieces[i].hi || (last && x == pieces[i].hi)))
            return pieces[i].poly.derivative().eval(x);
    }
    fail(ErrorCode::InvalidArgument, "point outside the pieces");
}

KoksmaReport grid_check(const FunctionFamily& f, const Rational& K, std::uint64_t n_max, std::uint64_t grid)
{
    KoksmaReport r;
    r.claimed_K = K;
    r.method = KoksmaMethod::Grid;
    const auto& fam = std::get<FunctionFamily::PiecewisePoly>(f.kind());
    const Rational lo = fam.functions.front().front().lo;
    const Rational hi = fam.functions.front().back().hi;
    const Rational a = std::max(lo, Rational(0));
    const Rational b = std::min(hi, Rational(1));
    auto member = [&](std::uint64_t n) -> const std::vector<PolyPiece>& {
        return fam.cyclic ? fam.functions[(n - 1) % fam.functions.size()] : fam.functions[n - 1];
    };
    std::vector<Rational> xs;
    for (std::uint64_t i = 0; i <= grid; ++i)
        xs.push_back(a + (b - a) * make_rational(static_cast<long>(i), static_cast<long>(grid)));
    for (std::uint64_t m = 1; m <= n_max; ++m) {
        for (std::uint64_t n = m + 1; n <= n_max; ++n) {
            ++r.checked_pairs;
            std::vector<Rational> d;
            for (const auto& x : xs) {
                d.push_back(poly_deriv_at(member(m), x) - poly_deriv_at(member(n), x));
                if (abs(d.back()) < K) {
                    r.verdict = KoksmaVerdict::Refuted;
                    r.witness = KoksmaWitness{m, n, x, abs(d.back()), false};
                    return r;
                }
            }
            bool up = false, down = false;
            for (std::size_t i = 1; i < d.size(); ++i) {
                up = up || d[i] > d[i - 1];
                down = down || d[i] < d[i - 1];
                if (up && down) {
                    r.verdict = KoksmaVerdict::Refuted;
                    r.witness = KoksmaWitness{m, n, xs[i - 1], abs(d[i - 1]), true};
                    return r;
                }
            }
        }
    }
    r.verdict = KoksmaVerdict::Inconclusive;
    return r;
}

} // namespace

KoksmaReport koksma_check(const FunctionFamily& f, const Rational& K, std::uint64_t n_max, std::uint64_t grid)
{
    require(K > 0, "koksma_check: K must be positive");
    require(n_max >= 2, "koksma_check: n_max must be at least 2");
    if (const auto len = f.length())
        n_max = std::min(n_max, *len);
    require(n_max >= 2, "koksma_check: family has fewer than two members");

    if (!f.is_builtin())
        return grid_check(f, K, n_max, std::max<std::uint64_t>(grid, 1));

    KoksmaReport r;
    r.claimed_K = K;
    r.method = KoksmaMethod::Symbolic;
    r.checked_pairs = pair_count(n_max);
    // Every built-in member has an affine or monomial derivative; the
    // differences below are constants or handled explicitly.
    auto settle = [&](const Rational& gap, std::uint64_t m, std::uint64_t n, const Rational& x) {
        if (gap >= K) {
            r.verdict = KoksmaVerdict::Certified;
        } else {
            r.verdict = KoksmaVerdict::Refuted;
            r.witness = KoksmaWitness{m, n, x, gap, false};
        }
    };
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, FunctionFamily::Linear>) {
                // Constant derivatives a_n: the smallest pairwise gap decides.
                std::uint64_t bm = 1, bn = 2;
                Rational best = abs(Rational(k.a.at(1) - k.a.at(2)));
                for (std::uint64_t m = 1; m <= n_max; ++m)
                    for (std::uint64_t n = m + 1; n <= n_max; ++n) {
                        const Rational gap = abs(Rational(k.a.at(m) - k.a.at(n)));
                        if (gap < best) {
                            best = gap;
                            bm = m;
                            bn = n;
                        }
                    }
                settle(best, bm, bn, 0);
            } else if constexpr (std::is_same_v<T, FunctionFamily::Geometric>) {
                // t^n increasing in n, so the smallest gap is between
                // consecutive members, and it grows with n.
                std::uint64_t bm = 1;
                Rational best = rational_pow(k.t, 2) - k.t;
                for (std::uint64_t m = 2; m < n_max; ++m) {
                    const Rational gap = rational_pow(k.t, m + 1) - rational_pow(k.t, m);
                    if (gap < best) {
                        best = gap;
                        bm = m;
                    }
                }
                settle(best, bm, bm + 1, 0);
            } else if constexpr (std::is_same_v<T, FunctionFamily::Rotation>) {
                settle(0, 1, 2, 0);
            } else if constexpr (std::is_same_v<T, FunctionFamily::PowerMap>) {
                // u_m'(0) = u_n'(0) = 0 for m, n >= 2; with only two members,
                // 1 - 2x vanishes at x = 1/2.
                if (n_max >= 3)
                    settle(0, 2, 3, 0);
                else
                    settle(0, 1, 2, make_rational(1, 2));
            }
        },
        f.kind());
    return r;
}

Prop15Result build_prop15_exponents(const RealOracle& x, std::size_t count, const DigitOptions& opts)
{
    require(count >= 1, "build_prop15_exponents: count must be at least 1");
    Prop15Result out;
    if (const auto exact = x.exact_rational(); exact && is_dyadic(*exact)) {
        out.dyadic = true;
        out.k = dyadic_exponent(*exact);
        for (std::size_t j = 0; j < count; ++j)
            out.exponents.push_back(out.k + j);
        return out;
    }
    long limit = std::max(opts.precision_cap, static_cast<long>(2 * count + 64));
    if (const auto avail = x.max_precision())
        limit = std::min(limit, *avail - 1);
    long m = std::min(static_cast<long>(2 * count + 16), limit);
    for (;;) {
        if (m < 1)
            break;
        std::vector<std::uint8_t> digits;
        try {
            digits = binary_digits(x, static_cast<std::size_t>(m), opts);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DigitFileExhausted)
                throw;
            break;
        }
        out.exponents.clear();
        for (std::size_t i = 0; i < digits.size() && out.exponents.size() < count; ++i)
            if (digits[i] == 0)
                out.exponents.push_back(i + 1);
        if (out.exponents.size() == count)
            return out;
        if (m >= limit)
            break;
        m = std::min(2 * m, limit);
    }
    fail(ErrorCode::ZeroDigitsExhausted,
        "fewer than " + std::to_string(count) + " zero digits within " + std::to_string(limit) + " bits");
}

QInterval prop23_cell(const RealOracle& x, std::size_t n, const DigitOptions& opts)
{
    require(n >= 1, "prop23_cell: n starts at 1");
    const std::size_t m = 2 * n + 1;
    const auto digits = binary_digits(x.scaled(Integer(static_cast<unsigned long>(n))), m, opts);
    Integer cell = 0;
    for (auto d : digits)
        cell = 2 * cell + d;
    const Rational width = pow2(-static_cast<long>(m));
    return QInterval(Rational(cell) * width, Rational(cell + 1) * width);
}

Sigma01Prefix build_prop23_set(const RealOracle& x, std::size_t p, const DigitOptions& opts)
{
    require(p >= 1, "build_prop23_set: p must be at least 1");
    require(!x.exact_rational().has_value(), "build_prop23_set: x must be irrational");
    std::vector<QInterval> cells;
    for (std::size_t n = 1; n <= p; ++n)
        cells.push_back(prop23_cell(x, n, opts));
    return Sigma01Prefix::from_enumeration(
        cells, [](std::size_t q) -> Rational { return pow2(-2 * static_cast<long>(q) + 2) / 3; });
}

QIntervalSet build_pitfall_set(const std::vector<Ball>& points, std::size_t count)
{
    require(count <= points.size(), "build_pitfall_set: count exceeds the number of points");
    std::vector<QInterval> parts;
    for (std::size_t i = 0; i < count; ++i) {
        const long n = static_cast<long>(i + 1);
        const Rational pad = pow2(-n - 2);
        require(points[i].radius() < pad, "build_pitfall_set: point " + std::to_string(n) + " is too coarse");
        const Rational c = points[i].center().to_rational();
        parts.emplace_back(c - pad, c + pad);
    }
    return QIntervalSet(std::move(parts)).clip(0, 1);
}

} // namespace udr
