#include "udr/io.hpp"

#include "udr/error.hpp"

#include <fstream>
#include <sstream>

namespace udr {

Json to_json(const QInterval& i)
{
    Json j;
    j["lo"] = to_string(i.lo);
    j["hi"] = to_string(i.hi);
    return j;
}

Json to_json(const QIntervalSet& s)
{
    Json j;
    j["intervals"] = Json::array();
    for (const auto& i : s.intervals())
        j["intervals"].push_back(to_json(i));
    j["measure"] = to_string(s.measure());
    return j;
}

Json to_json(const Ball& b)
{
    Json j;
    j["center"] = to_string(b.center().to_rational());
    j["radius"] = to_string(b.radius().to_rational());
    return j;
}

Json to_json(const ComplexBall& z)
{
    Json j;
    j["re"] = to_json(z.re);
    j["im"] = to_json(z.im);
    return j;
}

namespace {

Rational field(const Json& v)
{
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(Integer(static_cast<long>(v.get<long long>())));
    fail(ErrorCode::ParseError, "expected a rational, got " + v.dump());
}

} // namespace

QIntervalSet interval_set_from_json(const Json& j)
{
    try {
        const Json* list = &j;
        if (j.is_object()) {
            if (j.contains("intervals"))
                list = &j.at("intervals");
            else if (j.contains("set"))
                return interval_set_from_json(j.at("set"));
            else
                fail(ErrorCode::ParseError, "interval set needs an \"intervals\" key");
        }
        if (!list->is_array())
            fail(ErrorCode::ParseError, "intervals must be an array");
        std::vector<QInterval> out;
        for (const auto& iv : *list) {
            if (iv.is_array())
                out.emplace_back(field(iv.at(0)), field(iv.at(1)));
            else
                out.emplace_back(field(iv.at("lo")), field(iv.at("hi")));
        }
        return QIntervalSet(out);
    } catch (const Json::exception& e) {
        fail(ErrorCode::ParseError, std::string("interval set: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument)
            fail(ErrorCode::ParseError, e.what());
        throw;
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

QIntervalSet load_interval_set(const std::string& path)
{
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const Json::exception& e) {
        fail(ErrorCode::ParseError, path + ": " + e.what());
    }
    return interval_set_from_json(j);
}

QIntervalSet parse_target(const std::string& text)
{
    if (!text.empty() && text[0] == '@')
        return load_interval_set(text.substr(1));
    std::vector<QInterval> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos)
            fail(ErrorCode::ParseError, "target interval needs lo:hi, got " + part);
        try {
            out.emplace_back(parse_rational(part.substr(0, colon)), parse_rational(part.substr(colon + 1)));
        } catch (const Error& e) {
            fail(ErrorCode::ParseError, std::string("target ") + text + ": " + e.what());
        }
    }
    if (out.empty())
        fail(ErrorCode::ParseError, "empty target");
    return QIntervalSet(out);
}

namespace {

std::string csv_field(const std::string& f)
{
    if (f.find_first_of(",\"\n") == std::string::npos)
        return f;
    std::string q = "\"";
    for (char c : f) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

} // namespace

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows)
{
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i)
            os << (i ? "," : "") << csv_field(r[i]);
        os << '\n';
    };
    line(header);
    for (const auto& r : rows)
        line(r);
    return os.str();
}

} // namespace udr
