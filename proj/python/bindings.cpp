#include "tscalc/calculus.hpp"
#include "tscalc/cli.hpp"
#include "tscalc/error.hpp"
#include "tscalc/exprlang.hpp"
#include "tscalc/harness.hpp"
#include "tscalc/inequalities.hpp"
#include "tscalc/serialize.hpp"
#include "tscalc/timescale.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <variant>

namespace py = pybind11;
using namespace tscalc;

namespace {

using Field = std::variant<std::string, py::function>;

expr::Expr compile_for(const std::string& src, std::initializer_list<expr::Var> allowed) {
    auto e = expr::compile(src);
    for (auto v : e.free_variables())
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
            throw InputError(std::string("variable '") + expr::var_name(v) + "' is not allowed in '" + src + "'");
    return e;
}

ScalarField1D field1(const Field& f) {
    if (const auto* s = std::get_if<std::string>(&f)) {
        auto e = compile_for(*s, {expr::Var::T});
        return [e](double t) { return e(t); };
    }
    py::function fn = std::get<py::function>(f);
    return [fn](double t) { return fn(t).cast<double>(); };
}

ScalarField2D field2(const Field& f) {
    if (const auto* s = std::get_if<std::string>(&f)) {
        auto e = compile_for(*s, {expr::Var::X, expr::Var::Y});
        return [e](double x, double y) { return e.eval(expr::Bindings().set(expr::Var::X, x).set(expr::Var::Y, y)); };
    }
    py::function fn = std::get<py::function>(f);
    return [fn](double x, double y) { return fn(x, y).cast<double>(); };
}

py::dict report(const IneqReport& r) {
    py::dict d;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["abs_slack"] = r.abs_slack;
    d["rel_slack"] = r.rel_slack;
    d["holds"] = r.holds;
    d["tolerance"] = r.tolerance;
    return d;
}

EvalOptions options(double ineq_tol) {
    EvalOptions o;
    o.ineq_tol = ineq_tol;
    return o;
}

double lo(const TimeScale& ts, std::optional<double> a) { return a ? *a : ts.min(); }
double hi(const TimeScale& ts, std::optional<double> b) { return b ? *b : ts.max(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Time-scale calculus and inequality checks";

    // Later registrations are tried first, so the base class goes first.
    auto& base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", base);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<DegenerateKernelError>(m, "DegenerateKernelError", base);
    py::register_exception<SyntaxError>(m, "ExprSyntaxError", base);
    py::register_exception<EvalError>(m, "ExprEvalError", base);

    py::class_<TimeScale>(m, "TimeScale")
        .def(py::init([](const std::vector<std::pair<double, double>>& intervals) { return TimeScale::build(intervals); }),
             py::arg("intervals"))
        .def_static("integers", &TimeScale::integers, py::arg("first"), py::arg("last"))
        .def_static("parse", &parse_time_scale, py::arg("literal"))
        .def_property_readonly("components",
                               [](const TimeScale& ts) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& c : ts.components()) out.emplace_back(c.lo, c.hi);
                                   return out;
                               })
        .def_property_readonly("min", &TimeScale::min)
        .def_property_readonly("max", &TimeScale::max)
        .def_property_readonly("purely_discrete", &TimeScale::purely_discrete)
        .def("__contains__", &TimeScale::contains)
        .def("sigma", &TimeScale::sigma)
        .def("rho", &TimeScale::rho)
        .def("point_info",
             [](const TimeScale& ts, double t) {
                 const auto pi = ts.point_info(t);
                 py::dict d;
                 d["t"] = pi.t;
                 d["sigma"] = pi.sigma;
                 d["rho"] = pi.rho;
                 d["mu"] = pi.mu;
                 d["nu"] = pi.nu;
                 d["right_scattered"] = pi.right_scattered();
                 d["left_scattered"] = pi.left_scattered();
                 return d;
             })
        .def("grid", &TimeScale::grid, py::arg("max_step"))
        .def("restrict", &TimeScale::restrict, py::arg("a"), py::arg("b"))
        .def("__eq__", [](const TimeScale& a, const TimeScale& b) { return a == b; })
        .def("__repr__", [](const TimeScale& ts) { return "TimeScale(" + to_json(ts).dump() + ")"; });

    m.def(
        "integrate",
        [](const TimeScale& ts, const Field& f, double a, double b, const std::string& mode) {
            return integrate(ts, field1(f), a, b, IntegralMode::parse(mode));
        },
        py::arg("ts"), py::arg("f"), py::arg("a"), py::arg("b"), py::arg("mode") = "delta");

    m.def(
        "differentiate",
        [](const TimeScale& ts, const Field& f, double t, const std::string& mode) {
            return differentiate(ts, field1(f), t, IntegralMode::parse(mode));
        },
        py::arg("ts"), py::arg("f"), py::arg("t"), py::arg("mode") = "delta");

    m.def(
        "young", [](double xi, double lambda, double p, double tol) { return report(young(xi, lambda, HolderPair(p), tol)); },
        py::arg("xi"), py::arg("lam"), py::arg("p"), py::arg("tol") = 1e-9);

    m.def(
        "reverse_holder",
        [](const TimeScale& ts, const Field& f, const Field& g, double p, double alpha, std::optional<double> a,
           std::optional<double> b, double tol) {
            return report(reverse_holder(ts, lo(ts, a), hi(ts, b), Alpha(alpha), field1(f), field1(g), HolderPair(p),
                                         std::nullopt, options(tol)));
        },
        py::arg("ts"), py::arg("f"), py::arg("g"), py::arg("p"), py::arg("alpha") = 1.0, py::arg("a") = py::none(),
        py::arg("b") = py::none(), py::arg("tol") = 1e-9);

    m.def(
        "holder_2d",
        [](const TimeScale& ts, const Field& h, const Field& f, const Field& g, double p, double alpha,
           std::optional<double> a, std::optional<double> b, double tol) {
            return report(holder_2d(ts, lo(ts, a), hi(ts, b), Alpha(alpha), field2(h), field2(f), field2(g),
                                    HolderPair(p), options(tol)));
        },
        py::arg("ts"), py::arg("h"), py::arg("f"), py::arg("g"), py::arg("p"), py::arg("alpha") = 1.0,
        py::arg("a") = py::none(), py::arg("b") = py::none(), py::arg("tol") = 1e-9);

    m.def(
        "cauchy_schwarz_2d",
        [](const TimeScale& ts, const Field& h, const Field& f, const Field& g, double alpha, std::optional<double> a,
           std::optional<double> b, double tol) {
            return report(
                cauchy_schwarz_2d(ts, lo(ts, a), hi(ts, b), Alpha(alpha), field2(h), field2(f), field2(g), options(tol)));
        },
        py::arg("ts"), py::arg("h"), py::arg("f"), py::arg("g"), py::arg("alpha") = 1.0, py::arg("a") = py::none(),
        py::arg("b") = py::none(), py::arg("tol") = 1e-9);

    m.def(
        "hardy_pair",
        [](const TimeScale& ts, const Field& K, const Field& f, const Field& g, const Field& phi, const Field& psi,
           double p, double alpha, std::optional<double> a, std::optional<double> b, double tol) {
            const auto rp = hardy_pair(ts, lo(ts, a), hi(ts, b), Alpha(alpha), Kernel(field2(K)), field1(f), field1(g),
                                       WeightPair{field1(phi), field1(psi)}, HolderPair(p), options(tol));
            return py::make_tuple(report(rp.first), report(rp.second));
        },
        py::arg("ts"), py::arg("K"), py::arg("f"), py::arg("g"), py::arg("phi"), py::arg("psi"), py::arg("p"),
        py::arg("alpha") = 1.0, py::arg("a") = py::none(), py::arg("b") = py::none(), py::arg("tol") = 1e-9);

    m.def(
        "canonical",
        [](const std::string& src) { return expr::to_string(expr::compile(src)); }, py::arg("source"),
        "Fully parenthesized form of an expression.");

    m.def(
        "evaluate",
        [](const std::string& src, const std::map<std::string, double>& vars) {
            const auto e = expr::compile(src);
            expr::Bindings b;
            for (const auto& [name, value] : vars) {
                bool known = false;
                for (auto v : {expr::Var::T, expr::Var::X, expr::Var::Y, expr::Var::U, expr::Var::V})
                    if (name == expr::var_name(v)) {
                        b.set(v, value);
                        known = true;
                    }
                if (!known) throw InputError("unknown variable '" + name + "'");
            }
            return e.eval(b);
        },
        py::arg("source"), py::arg("vars") = std::map<std::string, double>{});

    m.def(
        "_check_json",
        [](const std::string& doc) { return cli::check_instance(Json::parse(doc), EvalOptions{}).output.dump(); },
        py::arg("doc"));

    m.def(
        "_fuzz_json",
        [](std::uint64_t seed, std::size_t instances, const std::vector<std::string>& checks, unsigned threads,
           bool shrink, double dense_fraction) {
            harness::FuzzConfig cfg;
            cfg.seed = seed;
            cfg.instances = instances;
            cfg.threads = threads;
            cfg.shrink = shrink;
            cfg.dense_fraction = dense_fraction;
            if (!checks.empty()) {
                cfg.checks.clear();
                for (const auto& name : checks) {
                    const auto c = harness::check_from_name(name);
                    if (!c) throw InputError("unknown check '" + name + "'");
                    cfg.checks.push_back(*c);
                }
            }
            harness::FuzzSummary s;
            {
                py::gil_scoped_release release;
                s = harness::run_suite(cfg);
            }
            return harness::to_json(s).dump();
        },
        py::arg("seed"), py::arg("instances"), py::arg("checks"), py::arg("threads"), py::arg("shrink"),
        py::arg("dense_fraction"));

    m.def("check_names", [] {
        std::vector<std::string> out;
        for (auto c : harness::all_checks()) out.emplace_back(harness::check_name(c));
        return out;
    });
}
