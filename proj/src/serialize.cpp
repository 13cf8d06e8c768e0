#include "tscalc/serialize.hpp"

#include "tscalc/error.hpp"

#include <charconv>
#include <cmath>

namespace tscalc {

namespace {

// JSON has no infinities; non-finite values are written as strings.
Json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Json to_json(const IneqReport& r) {
    Json j;
    j["lhs"] = number(r.lhs);
    j["rhs"] = number(r.rhs);
    j["abs_slack"] = number(r.abs_slack);
    j["rel_slack"] = number(r.rel_slack);
    j["holds"] = r.holds;
    j["tolerance"] = number(r.tolerance);
    return j;
}

Json to_json(const std::vector<Interval>& components) {
    Json j = Json::array();
    for (const auto& c : components) j.push_back(Json::array({c.lo, c.hi}));
    return j;
}

Json to_json(const TimeScale& ts) { return to_json(ts.components()); }

TimeScale time_scale_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw InputError("time_scale must be a nonempty array of [lo, hi] pairs");
    std::vector<Interval> iv;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw InputError("time_scale entry " + std::to_string(i) + " must be a [lo, hi] pair of numbers");
        iv.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return TimeScale::build(iv);
}

TimeScale parse_time_scale(std::string_view literal) {
    Json j;
    try {
        j = Json::parse(literal);
    } catch (const Json::parse_error& e) {
        throw InputError("time_scale literal: at position " + std::to_string(e.byte > 0 ? e.byte - 1 : 0) +
                         ": malformed interval list");
    }
    return time_scale_from_json(j);
}

namespace harness {

Json to_json(const FuzzSummary& s, bool include_wall_time) {
    Json j;
    j["seed"] = s.seed;
    j["total"] = s.total;
    j["reports"] = s.reports;
    j["passed"] = s.passed();
    j["min_rel_slack"] = number(s.min_rel_slack);

    Json per = Json::object();
    for (const auto& [name, st] : s.per_report) {
        Json e;
        e["evaluated"] = st.evaluated;
        e["violations"] = st.violations;
        e["min_rel_slack"] = number(st.min_rel_slack);
        per[name] = std::move(e);
    }
    j["per_report"] = std::move(per);

    Json vs = Json::array();
    for (const auto& v : s.violations) {
        Json e;
        e["instance"] = v.instance;
        e["check"] = v.check;
        e["report_name"] = v.report.name;
        e["report"] = tscalc::to_json(v.report.report);
        if (!v.report.error.empty()) e["error"] = v.report.error;
        e["original_scale"] = tscalc::to_json(v.original_scale);
        e["shrunk_scale"] = tscalc::to_json(v.shrunk_scale);
        vs.push_back(std::move(e));
    }
    j["violations"] = std::move(vs);
    if (include_wall_time) j["wall_time"] = s.wall_time;
    return j;
}

}  // namespace harness

}  // namespace tscalc
