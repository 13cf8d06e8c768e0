#pragma once

/**
 * @file serialize.hpp
 * @brief JSON forms of reports, time scales and fuzz summaries.
 *
 * Field order is fixed (ordered_json) and doubles are written in shortest
 * round-trip form, so equal inputs give byte-identical output.
 */

#include "tscalc/harness.hpp"
#include "tscalc/inequalities.hpp"
#include "tscalc/timescale.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace tscalc {

using Json = nlohmann::ordered_json;

Json to_json(const IneqReport& r);
Json to_json(const TimeScale& ts);
Json to_json(const std::vector<Interval>& components);

/// Parses an interval-list literal such as "[[0,0],[1,2]]". Throws InputError
/// (with the byte offset for malformed JSON) on bad input.
TimeScale parse_time_scale(std::string_view literal);
TimeScale time_scale_from_json(const Json& j);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

namespace harness {

/// wall_time is written last so callers can drop it for byte comparisons.
Json to_json(const FuzzSummary& s, bool include_wall_time = true);

}  // namespace harness

}  // namespace tscalc
