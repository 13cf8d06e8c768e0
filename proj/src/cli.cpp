#include "tscalc/cli.hpp"

#include "tscalc/error.hpp"
#include "tscalc/exprlang.hpp"
#include "tscalc/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace tscalc::cli {

namespace {

using expr::Var;

// --- Instance documents ----------------------------------------------------

class Doc {
public:
    explicit Doc(const Json& j) : j_(j) {
        if (!j_.is_object()) throw InputError("instance file must be a JSON object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    double number(const char* key) const {
        if (!has(key)) throw InputError(std::string("missing field '") + key + "'");
        const auto& v = j_.at(key);
        if (!v.is_number()) throw InputError(std::string("field '") + key + "' must be a number");
        return v.get<double>();
    }

    double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    // Compiles an expression field and checks its variables against `allowed`.
    expr::Expr expression(const char* key, std::initializer_list<Var> allowed) {
        if (!has(key)) throw InputError(std::string("missing field '") + key + "'");
        const auto& v = j_.at(key);
        std::string src;
        if (v.is_string()) src = v.get<std::string>();
        else if (v.is_number()) src = v.dump();
        else throw InputError(std::string("field '") + key + "' must be an expression string");

        expr::Expr e;
        try {
            e = expr::compile(src);
        } catch (const SyntaxError& ex) {
            throw InputError(std::string("field '") + key + "': " + ex.what());
        }
        for (Var fv : e.free_variables()) {
            if (std::find(allowed.begin(), allowed.end(), fv) == allowed.end()) {
                std::string names;
                for (Var a : allowed) names += std::string(names.empty() ? "" : ", ") + expr::var_name(a);
                throw InputError(std::string("field '") + key + "': variable '" + expr::var_name(fv) +
                                 "' is not allowed here (use " + names + ")");
            }
        }
        sources_[key] = src;
        return e;
    }

    ScalarField1D field_t(const char* key) { return wrap1(key, expression(key, {Var::T}), Var::T); }
    ScalarField1D field_u(const char* key) { return wrap1(key, expression(key, {Var::U}), Var::U); }

    ScalarField2D field_xy(const char* key) {
        auto e = expression(key, {Var::X, Var::Y});
        return [e, name = std::string(key)](double x, double y) {
            return guarded(name, [&] { return e.eval(expr::Bindings().set(Var::X, x).set(Var::Y, y)); });
        };
    }

    ScalarField2D field_uv(const char* key) {
        auto e = expression(key, {Var::U, Var::V});
        return [e, name = std::string(key)](double u, double v) {
            return guarded(name, [&] { return e.eval(expr::Bindings().set(Var::U, u).set(Var::V, v)); });
        };
    }

    const Json& sources() const { return sources_; }

private:
    template <class Fn>
    static double guarded(const std::string& name, Fn&& fn) {
        try {
            return fn();
        } catch (const EvalError& ex) {
            throw EvalError("field '" + name + "': " + ex.what());
        }
    }

    static ScalarField1D wrap1(const char* key, expr::Expr e, Var var) {
        return [e = std::move(e), name = std::string(key), var](double t) {
            return guarded(name, [&] { return e.eval(expr::Bindings().set(var, t)); });
        };
    }

    const Json& j_;
    Json sources_ = Json::object();
};

const std::vector<std::string> kInequalities{
    "reverse_holder",     "holder_2d",          "cauchy_schwarz_2d", "young",
    "hardy_pair",         "hardy_upper",        "hardy_lower",       "hardy_upper_direct",
    "hardy_lower_direct", "bounded_hardy",      "general_kernel",    "equality_witness",
};

void put_pair(Json& reports, const ReportPair& rp) {
    reports["bilinear"] = to_json(rp.first);
    reports["dual"] = to_json(rp.second);
}

}  // namespace

const std::vector<std::string>& inequality_names() { return kInequalities; }

CheckResult check_instance(const Json& doc_json, const EvalOptions& opts) {
    Doc doc(doc_json);
    if (!doc.has("inequality") || !doc_json.at("inequality").is_string())
        throw InputError("missing field 'inequality'");
    const std::string name = doc_json.at("inequality").get<std::string>();
    if (std::find(kInequalities.begin(), kInequalities.end(), name) == kInequalities.end())
        throw InputError("field 'inequality': unknown inequality '" + name + "'");

    Json echo;
    echo["inequality"] = name;
    Json reports = Json::object();

    if (name == "young") {
        const HolderPair pair(doc.number("p"));
        const IneqReport r = young(doc.number("xi"), doc.number("lambda"), pair, opts.ineq_tol);
        echo["p"] = pair.p();
        echo["xi"] = doc.number("xi");
        echo["lambda"] = doc.number("lambda");
        reports["young"] = to_json(r);
    } else {
        if (!doc.has("time_scale")) throw InputError("missing field 'time_scale'");
        TimeScale ts = TimeScale::integers(0, 0);
        try {
            ts = time_scale_from_json(doc_json.at("time_scale"));
        } catch (const InputError& e) {
            throw InputError(std::string("field 'time_scale': ") + e.what());
        }
        const Alpha alpha(doc.number("alpha"));
        const double p = name == "cauchy_schwarz_2d" ? doc.number_or("p", 2.0) : doc.number("p");
        const HolderPair pair(p);
        const double a = doc.number_or("a", ts.min());
        const double b = doc.number_or("b", ts.max());

        echo["time_scale"] = to_json(ts);
        echo["alpha"] = alpha.value();
        echo["p"] = pair.p();
        echo["a"] = a;
        echo["b"] = b;

        if (name == "reverse_holder") {
            auto f = doc.field_t("f");
            auto g = doc.field_t("g");
            std::optional<BoundsMN> bounds;
            if (doc.has("m") || doc.has("M")) bounds = BoundsMN(doc.number("m"), doc.number("M"));
            reports["reverse_holder"] = to_json(reverse_holder(ts, a, b, alpha, f, g, pair, bounds, opts));
        } else if (name == "holder_2d" || name == "cauchy_schwarz_2d") {
            auto h = doc.field_xy("h");
            auto f = doc.field_xy("f");
            auto g = doc.field_xy("g");
            reports[name] = to_json(name == "holder_2d" ? holder_2d(ts, a, b, alpha, h, f, g, pair, opts)
                                                        : cauchy_schwarz_2d(ts, a, b, alpha, h, f, g, opts));
        } else if (name == "hardy_pair" || name == "bounded_hardy") {
            const Kernel K(doc.field_xy("K"));
            auto f = doc.field_t("f");
            auto g = doc.field_t("g");
            const WeightPair w{doc.field_t("phi"), doc.field_t("psi")};
            if (name == "hardy_pair") {
                put_pair(reports, hardy_pair(ts, a, b, alpha, K, f, g, w, pair, opts));
            } else {
                auto F1 = doc.field_t("F1");
                auto G1 = doc.field_t("G1");
                put_pair(reports, bounded_hardy(ts, a, b, alpha, K, f, g, w, pair, F1, G1, opts));
            }
        } else if (name == "hardy_upper" || name == "hardy_lower" || name == "hardy_upper_direct" ||
                   name == "hardy_lower_direct") {
            const Triangle tri = name.starts_with("hardy_upper") ? Triangle::Upper : Triangle::Lower;
            auto h = doc.field_t("h");
            auto f = doc.field_t("f");
            auto g = doc.field_t("g");
            const WeightPair w{doc.field_t("phi"), doc.field_t("psi")};
            if (name.ends_with("_direct"))
                put_pair(reports, triangular_hardy_direct(ts, a, b, alpha, h, tri, f, g, w, pair, opts));
            else
                put_pair(reports, hardy_pair(ts, a, b, alpha, triangular_kernel(h, tri), f, g, w, pair, opts));
        } else if (name == "general_kernel") {
            const Interval ab{a, b};
            const Interval cd{doc.number_or("c", a), doc.number_or("d", b)};
            echo["c"] = cd.lo;
            echo["d"] = cd.hi;
            auto F = doc.field_t("F");
            auto G = doc.field_t("G");
            auto f = doc.field_t("f");
            auto g = doc.field_t("g");
            GeneralHardySpec spec;
            spec.L = doc.field_uv("L");
            spec.M = doc.field_u("M");
            spec.N = doc.field_u("N");
            const auto& jc = doc_json.contains("C") ? doc_json.at("C") : Json("holder");
            if (jc.is_string() && jc.get<std::string>() == "holder")
                spec.C = general_kernel_holder_constant(ts, ab, cd, alpha, F, G, f, g, spec, pair, opts);
            else
                spec.C = doc.number("C");
            echo["C"] = spec.C;
            put_pair(reports, general_kernel_pair(ts, ab, cd, alpha, F, G, f, g, spec, pair, opts));
        } else if (name == "equality_witness") {
            const Kernel K(doc.field_xy("K"));
            const WeightPair w{doc.field_t("phi"), doc.field_t("psi")};
            const double A = doc.number("A"), B = doc.number("B");
            echo["A"] = A;
            echo["B"] = B;
            const auto [f, g] = equality_witness(w, pair, A, B);
            put_pair(reports, hardy_pair(ts, a, b, alpha, K, f, g, w, pair, opts));
        }
    }
    echo["functions"] = doc.sources();

    CheckResult res;
    for (const auto& [k, r] : reports.items()) res.all_hold = res.all_hold && r.at("holds").get<bool>();
    res.output["inequality"] = name;
    res.output["instance"] = std::move(echo);
    res.output["reports"] = std::move(reports);
    res.output["holds"] = res.all_hold;
    return res;
}

// --- Command line ------------------------------------------------------------

namespace {

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
        throw InputError("'" + path + "': at position " + std::to_string(e.byte > 0 ? e.byte - 1 : 0) +
                         ": malformed JSON");
    }
}

std::optional<double> json_number(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    return std::nullopt;
}

std::string show(const Json& j) {
    const auto v = json_number(j);
    return v ? format_double(*v) : j.dump();
}

int print_report(const Json& s, std::ostream& out) {
    for (const char* key : {"seed", "total", "reports", "per_report", "violations"})
        if (!s.contains(key)) throw InputError(std::string("summary: missing field '") + key + "'");
    out << "seed " << s.at("seed").dump() << ", " << s.at("total").dump() << " instances, " << s.at("reports").dump()
        << " reports\n";
    if (s.contains("min_rel_slack")) out << "min rel_slack " << show(s.at("min_rel_slack")) << "\n";
    if (s.contains("wall_time")) out << "wall time " << show(s.at("wall_time")) << " s\n";
    out << "\n" << std::left << std::setw(48) << "report" << std::right << std::setw(10) << "evaluated" << std::setw(12)
        << "violations" << "  min rel_slack\n";
    for (const auto& [name, st] : s.at("per_report").items()) {
        out << std::left << std::setw(48) << name << std::right << std::setw(10) << st.at("evaluated").dump()
            << std::setw(12) << st.at("violations").dump() << "  " << show(st.at("min_rel_slack")) << "\n";
    }
    const auto& vs = s.at("violations");
    out << "\n" << vs.size() << " violation(s)\n";
    for (const auto& v : vs) {
        out << "  instance " << v.at("instance").dump() << " " << v.value("report_name", v.value("check", "?"));
        if (v.contains("error")) out << " error: " << v.at("error").get<std::string>();
        else if (v.contains("report"))
            out << " lhs=" << show(v.at("report").at("lhs")) << " rhs=" << show(v.at("report").at("rhs"));
        if (v.contains("shrunk_scale")) out << " shrunk=" << v.at("shrunk_scale").dump();
        out << "\n";
    }
    return vs.empty() ? kOk : kViolation;
}

std::vector<harness::Check> parse_checks(const std::string& list) {
    if (list.empty() || list == "all") return harness::all_checks();
    std::vector<harness::Check> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto c = harness::check_from_name(item);
        if (!c) throw InputError("--checks: unknown check '" + item + "'");
        out.push_back(*c);
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-scale calculus and inequality checker", "tscalc"};
    app.require_subcommand(1);
    app.fallthrough();

    EvalOptions opts;
    app.add_option("--quad-tol", opts.quad.abs_tol, "Absolute tolerance for adaptive quadrature");
    app.add_option("--ineq-tol", opts.ineq_tol, "Relative tolerance when judging an inequality");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate an integral or derivative");
    eval->require_subcommand(1);
    std::string scale, mode_text = "delta", fn;
    double from = 0, to = 0, at = 0;
    auto* integral = eval->add_subcommand("integral", "Integral of --fn from --from to --to");
    auto* derivative = eval->add_subcommand("derivative", "Derivative of --fn at --at");
    for (auto* sub : {integral, derivative}) {
        sub->add_option("--scale", scale, "Interval list, e.g. \"[[0,0],[1,2]]\"")->required();
        sub->add_option("--mode", mode_text, "delta | nabla | diamond:<alpha>");
        sub->add_option("--fn", fn, "Expression in t")->required();
    }
    integral->add_option("--from", from)->required();
    integral->add_option("--to", to)->required();
    derivative->add_option("--at", at)->required();

    // check
    auto* check = app.add_subcommand("check", "Evaluate the inequality described by an instance file");
    std::string instance_path;
    check->add_option("instance", instance_path, "Instance JSON file")->required();

    // fuzz
    auto* fuzz = app.add_subcommand("fuzz", "Run the seeded property suite");
    harness::FuzzConfig fcfg;
    std::string json_out, checks_list;
    bool no_shrink = false;
    auto* seed_opt = fuzz->add_option("--seed", fcfg.seed, "Seed (default 42, or TSCALC_SEED)");
    fuzz->add_option("--instances", fcfg.instances, "Number of instances");
    fuzz->add_option("--json", json_out, "Write the summary JSON here");
    fuzz->add_option("--threads", fcfg.threads, "Worker threads");
    fuzz->add_option("--checks", checks_list, "Comma-separated check names (default: all)");
    fuzz->add_option("--dense-fraction", fcfg.dense_fraction, "Share of instances with dense components");
    fuzz->add_flag("--no-shrink", no_shrink, "Skip counterexample shrinking");

    // report
    auto* report = app.add_subcommand("report", "Pretty-print a saved fuzz summary");
    std::string summary_path;
    report->add_option("summary", summary_path, "Summary JSON file")->required();

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        opts.quad.validate();
        if (!(opts.ineq_tol >= 0)) throw InputError("--ineq-tol must be nonnegative");

        if (eval->parsed()) {
            TimeScale ts = TimeScale::integers(0, 0);
            try {
                ts = parse_time_scale(scale);
            } catch (const InputError& e) {
                throw InputError(std::string("--scale: ") + e.what());
            }
            const IntegralMode mode = IntegralMode::parse(mode_text);
            expr::Expr e;
            try {
                e = expr::compile(fn);
            } catch (const SyntaxError& ex) {
                throw InputError(std::string("--fn: ") + ex.what());
            }
            for (auto v : e.free_variables())
                if (v != Var::T) throw InputError(std::string("--fn: variable '") + expr::var_name(v) + "' is not allowed (use t)");
            const ScalarField1D f = [&](double t) { return e(t); };
            const double v = integral->parsed() ? integrate(ts, f, from, to, mode, opts.quad)
                                                : differentiate(ts, f, at, mode, opts.quad);
            out << format_double(v) << "\n";
            return kOk;
        }

        if (check->parsed()) {
            const CheckResult res = check_instance(read_json_file(instance_path), opts);
            out << res.output.dump(2) << "\n";
            return res.all_hold ? kOk : kViolation;
        }

        if (fuzz->parsed()) {
            if (seed_opt->count() == 0) {
                if (const char* env = std::getenv("TSCALC_SEED")) {
                    try {
                        std::size_t used = 0;
                        fcfg.seed = std::stoull(env, &used);
                        if (used != std::string(env).size()) throw std::invalid_argument("trailing");
                    } catch (const std::exception&) {
                        throw InputError(std::string("TSCALC_SEED: not an unsigned integer: '") + env + "'");
                    }
                }
            }
            fcfg.checks = parse_checks(checks_list);
            fcfg.shrink = !no_shrink;
            fcfg.eval = opts;
            const auto summary = harness::run_suite(fcfg);
            if (!json_out.empty()) {
                std::ofstream f(json_out, std::ios::binary);
                if (!f) throw InputError("cannot write '" + json_out + "'");
                f << harness::to_json(summary).dump(2) << "\n";
            }
            out << "seed " << summary.seed << ": " << summary.total << " instances, " << summary.reports
                << " reports, " << summary.violations.size() << " violation(s), min rel_slack "
                << format_double(summary.min_rel_slack) << "\n";
            for (const auto& v : summary.violations) {
                out << "  instance " << v.instance << " " << v.report.name;
                if (!v.report.error.empty()) out << " error: " << v.report.error;
                else out << " lhs=" << format_double(v.report.report.lhs) << " rhs=" << format_double(v.report.report.rhs);
                out << "\n";
            }
            return summary.passed() ? kOk : kViolation;
        }

        if (report->parsed()) return print_report(read_json_file(summary_path), out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace tscalc::cli
