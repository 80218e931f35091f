#include "udr/rational.hpp"

#include "udr/error.hpp"

#include <cctype>
#include <string>

namespace udr {

Rational make_rational(const Integer& num, const Integer& den)
{
    if (den == 0)
        fail(ErrorCode::InvalidArgument, "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Integer floor(const Rational& x)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Integer ceil(const Rational& x)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Rational abs(const Rational& x)
{
    return x < 0 ? Rational(-x) : x;
}

Rational frac_exact(const Rational& x)
{
    Rational r = x - Rational(floor(x));
    return r;
}

Integer pow2_int(unsigned long e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

Rational pow2(long e)
{
    if (e >= 0)
        return Rational(pow2_int(static_cast<unsigned long>(e)));
    return make_rational(Integer(1), pow2_int(static_cast<unsigned long>(-e)));
}

Rational pow(const Rational& base, unsigned long e)
{
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
    return make_rational(num, den);
}

std::size_t bit_length(const Integer& n)
{
    if (n == 0)
        return 0;
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

bool is_dyadic(const Rational& x)
{
    const mpz_srcptr den = x.get_den_mpz_t();
    return mpz_popcount(den) == 1;
}

unsigned long dyadic_exponent(const Rational& x)
{
    require(is_dyadic(x), "dyadic_exponent: value is not dyadic");
    return mpz_scan1(x.get_den_mpz_t(), 0);
}

std::string to_string(const Rational& x)
{
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_decimal(const Rational& x, int digits)
{
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    const bool neg = x < 0;
    Rational ax = abs(x);
    Integer scaled = floor(ax * Rational(scale));
    Integer ip, fp;
    mpz_fdiv_qr(ip.get_mpz_t(), fp.get_mpz_t(), scaled.get_mpz_t(), scale.get_mpz_t());
    std::string frac = fp.get_str();
    if (frac.size() < static_cast<std::size_t>(digits))
        frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
    std::string out = (neg ? "-" : "") + ip.get_str();
    if (digits > 0)
        out += "." + frac;
    return out;
}

double to_double(const Rational& x)
{
    return x.get_d();
}

Integer parse_integer(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])))
        ++start;
    s = s.substr(start);
    if (!s.empty() && s[0] == '+')
        s.erase(0, 1);
    Integer n;
    if (s.empty() || n.set_str(s, 10) != 0)
        fail(ErrorCode::ParseError, "not an integer: '" + std::string(text) + "'");
    return n;
}

Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash != std::string_view::npos)
        return make_rational(parse_integer(text.substr(0, slash)),
            parse_integer(text.substr(slash + 1)));
    const auto dot = text.find('.');
    if (dot == std::string_view::npos)
        return Rational(parse_integer(text));

    std::string whole(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    for (char c : frac)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            fail(ErrorCode::ParseError, "not a decimal: '" + std::string(text) + "'");
    bool neg = false;
    std::size_t i = 0;
    while (i < whole.size() && std::isspace(static_cast<unsigned char>(whole[i])))
        ++i;
    whole = whole.substr(i);
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) {
        neg = whole[0] == '-';
        whole.erase(0, 1);
    }
    if (whole.empty())
        whole = "0";
    if (frac.empty() && whole == "0" && text.size() <= 1)
        fail(ErrorCode::ParseError, "not a decimal: '" + std::string(text) + "'");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer digits = parse_integer(whole + frac);
    Rational r = make_rational(digits, scale);
    return neg ? Rational(-r) : r;
}

} // namespace udr
