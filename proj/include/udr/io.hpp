#pragma once

#include "udr/complex_ball.hpp"
#include "udr/interval_set.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace udr {

/// Insertion-ordered JSON; rationals are always "p/q" strings.
using Json = nlohmann::ordered_json;

Json to_json(const QInterval& i);
/// {"intervals":[{"lo":"p/q","hi":"p/q"}, ...], "measure":"p/q"}
Json to_json(const QIntervalSet& s);
/// {"center":"p/q","radius":"p/q"}
Json to_json(const Ball& b);
Json to_json(const ComplexBall& z);

/// Accepts {"intervals":[...]} (optionally nested under "set"), or a bare
/// array. Intervals are {"lo","hi"} objects or [lo, hi] pairs.
QIntervalSet interval_set_from_json(const Json& j);
QIntervalSet load_interval_set(const std::string& path);

/// "@file.json", or comma-separated "lo:hi" pairs ("0:1/2,3/4:1").
QIntervalSet parse_target(const std::string& text);

std::string read_file(const std::string& path);

/// Minimal CSV: header row plus data rows, comma-separated, fields quoted
/// only when they contain a comma or quote.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

} // namespace udr
