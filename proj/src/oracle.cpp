#include "udr/oracle.hpp"

#include "udr/elementary.hpp"
#include "udr/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace udr {

namespace {

bool perfect_square(const Rational& r)
{
    return mpz_perfect_square_p(r.get_num_mpz_t()) != 0 && mpz_perfect_square_p(r.get_den_mpz_t()) != 0;
}

Rational exact_sqrt(const Rational& r)
{
    Integer n, d;
    mpz_sqrt(n.get_mpz_t(), r.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), r.get_den_mpz_t());
    return make_rational(n, d);
}

Integer digits_prefix(const std::vector<std::uint8_t>& digits, std::size_t count)
{
    if (count == 0)
        return 0;
    std::string s(count, '0');
    for (std::size_t i = 0; i < count; ++i)
        s[i] = digits[i] ? '1' : '0';
    return Integer(s, 2);
}

std::vector<std::uint8_t> cell_to_digits(const Integer& cell, std::size_t m)
{
    std::vector<std::uint8_t> out(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = static_cast<std::uint8_t>(mpz_tstbit(cell.get_mpz_t(), m - 1 - i));
    return out;
}

} // namespace

RealOracle RealOracle::rational(const Rational& x)
{
    return RealOracle(Quadratic{x, 0, 0});
}

RealOracle RealOracle::sqrt(const Rational& r)
{
    return quadratic(0, 1, r);
}

RealOracle RealOracle::golden_ratio()
{
    return quadratic(make_rational(1, 2), make_rational(1, 2), 5);
}

RealOracle RealOracle::quadratic(const Rational& a, const Rational& b, const Rational& r)
{
    require(r >= 0, "quadratic oracle: negative radicand");
    if (b == 0 || r == 0)
        return RealOracle(Quadratic{a, 0, 0});
    return RealOracle(Quadratic{a, b, r});
}

RealOracle RealOracle::from_digits(const std::vector<std::uint8_t>& digits, std::string source)
{
    for (auto d : digits)
        require(d <= 1, "digit oracle: digits must be 0 or 1");
    return RealOracle(DigitFile{std::make_shared<const std::vector<std::uint8_t>>(digits), std::move(source), 1, 0});
}

RealOracle RealOracle::from_digit_text(const std::string& text, std::string source)
{
    std::istringstream in(text);
    std::string header;
    while (std::getline(in, header)) {
        if (header.find_first_not_of(" \t\r") != std::string::npos)
            break;
    }
    std::string compact;
    for (char c : header)
        if (!std::isspace(static_cast<unsigned char>(c)))
            compact += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (compact != "base2")
        fail(ErrorCode::ParseError, "digit file " + source + ": expected 'base 2' header");
    std::vector<std::uint8_t> digits;
    char c;
    while (in.get(c)) {
        if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        if (c != '0' && c != '1')
            fail(ErrorCode::ParseError, "digit file " + source + ": unexpected character '" + std::string(1, c) + "'");
        digits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return from_digits(digits, std::move(source));
}

RealOracle RealOracle::from_digit_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::ParseError, "cannot open digit file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_digit_text(ss.str(), path);
}

RealOracle RealOracle::parse(const std::string& text)
{
    if (text.rfind("file:", 0) == 0)
        return from_digit_file(text.substr(5));
    if (text == "phi" || text == "golden")
        return golden_ratio();
    if (text.rfind("sqrt", 0) == 0) {
        std::string rest = text.substr(4);
        if (!rest.empty() && rest[0] == ':')
            return sqrt(parse_rational(rest.substr(1)));
        const auto m = rest.find('m');
        if (m == std::string::npos)
            return sqrt(parse_rational(rest));
        return quadratic(-parse_rational(rest.substr(m + 1)), 1, parse_rational(rest.substr(0, m)));
    }
    return rational(parse_rational(text));
}

Ball RealOracle::query(long g) const
{
    require(g >= 0, "oracle query: negative precision");
    return std::visit(
        [g](const auto& d) -> Ball {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Quadratic>) {
                if (d.b == 0)
                    return Ball::from_rational(d.a, g);
                if (perfect_square(d.r))
                    return Ball::from_rational(d.a + d.b * exact_sqrt(d.r), g);
                const Integer bmag = ceil(abs(d.b));
                const long sg = g + 4 + static_cast<long>(bit_length(bmag));
                const auto [slo, shi] = sqrt_bounds(d.r, sg);
                Rational lo = d.a + d.b * slo;
                Rational hi = d.a + d.b * shi;
                if (hi < lo)
                    std::swap(lo, hi);
                return Ball::from_interval(lo, hi, g + 3);
            } else {
                const auto& digits = *d.digits;
                const bool plain = d.factor == 1 && d.offset == 0;
                const long bits = plain ? g : g + 2 + static_cast<long>(bit_length(d.factor));
                if (bits > static_cast<long>(digits.size()))
                    fail(ErrorCode::DigitFileExhausted,
                        d.source + ": precision " + std::to_string(bits) + " needs more than "
                            + std::to_string(digits.size()) + " digits");
                const auto count = static_cast<std::size_t>(bits);
                Ball x(Dyadic(digits_prefix(digits, count), -bits), Dyadic(1, -bits));
                if (plain)
                    return x;
                Ball scaled = Ball(Dyadic(d.factor)) * x;
                if (d.offset != 0)
                    scaled += Ball::from_rational(d.offset, g + 2);
                return scaled;
            }
        },
        desc_);
}

std::optional<Rational> RealOracle::exact_rational() const
{
    if (const auto* q = std::get_if<Quadratic>(&desc_)) {
        if (q->b == 0)
            return q->a;
        if (perfect_square(q->r))
            return Rational(q->a + q->b * exact_sqrt(q->r));
    }
    return std::nullopt;
}

std::optional<bool> RealOracle::is_rational() const
{
    if (std::holds_alternative<Quadratic>(desc_))
        return exact_rational().has_value();
    return std::nullopt;
}

std::optional<long> RealOracle::max_precision() const
{
    if (const auto* d = std::get_if<DigitFile>(&desc_)) {
        const long m = static_cast<long>(d->digits->size());
        if (d->factor == 1 && d->offset == 0)
            return m;
        return m - 2 - static_cast<long>(bit_length(d->factor));
    }
    return std::nullopt;
}

RealOracle RealOracle::scaled(const Integer& n) const
{
    if (const auto* q = std::get_if<Quadratic>(&desc_))
        return quadratic(q->a * Rational(n), q->b * Rational(n), q->r);
    DigitFile d = std::get<DigitFile>(desc_);
    d.factor *= n;
    d.offset *= Rational(n);
    return RealOracle(d);
}

RealOracle RealOracle::shifted(const Rational& q) const
{
    if (const auto* qd = std::get_if<Quadratic>(&desc_))
        return quadratic(qd->a + q, qd->b, qd->r);
    DigitFile d = std::get<DigitFile>(desc_);
    d.offset += q;
    return RealOracle(d);
}

std::string RealOracle::describe() const
{
    if (const auto* q = std::get_if<Quadratic>(&desc_)) {
        if (q->b == 0)
            return to_string(q->a);
        return to_string(q->a) + "+" + to_string(q->b) + "*sqrt(" + to_string(q->r) + ")";
    }
    const auto& d = std::get<DigitFile>(desc_);
    std::string s = "digits(" + d.source + ")";
    if (d.factor != 1)
        s = d.factor.get_str() + "*" + s;
    if (d.offset != 0)
        s += "+" + to_string(d.offset);
    return s;
}

Integer leading_digits_exact(const Rational& x, std::size_t m)
{
    return floor(frac_exact(x) * pow2(static_cast<long>(m)));
}

std::vector<std::uint8_t> binary_digits(const Approximator& x, std::size_t m, const DigitOptions& opts,
    std::optional<long> available_precision)
{
    if (m == 0)
        return {};
    const long ml = static_cast<long>(m);
    const long cap = std::max(opts.precision_cap, ml + 16);
    long g = ml + 16;
    const Dyadic cell_width(1, -ml);
    for (;;) {
        bool limited = false;
        if (available_precision && g >= *available_precision) {
            g = *available_precision;
            limited = true;
        }
        if (g > ml) {
            const Ball b = x(g);
            if (b.radius() < Dyadic(1, -1)) {
                if (auto f = try_frac(b)) {
                    const Dyadic lo = f->lower();
                    const Dyadic hi = f->upper();
                    const Integer cell = lo.mul_pow2(ml).floor();
                    const Dyadic left(cell, -ml);
                    if (left < lo && hi < left + cell_width)
                        return cell_to_digits(cell, m);
                }
            }
        }
        if (limited)
            fail(ErrorCode::DigitFileExhausted,
                "cannot separate " + std::to_string(m) + " digits within the available precision");
        if (g >= cap)
            fail(ErrorCode::AmbiguousDigit,
                "digit " + std::to_string(m) + " not separated from a dyadic boundary within "
                    + std::to_string(cap) + " bits");
        g = std::min(2 * g, cap);
    }
}

std::vector<std::uint8_t> binary_digits(const RealOracle& o, std::size_t m, const DigitOptions& opts)
{
    if (opts.declared_dyadic) {
        const auto exact = o.exact_rational();
        require(exact.has_value() && is_dyadic(*exact), "binary_digits: declared dyadic but value is not an exact dyadic");
        return cell_to_digits(leading_digits_exact(*exact, m), m);
    }
    return binary_digits(approximator(o), m, opts, o.max_precision());
}

} // namespace udr
