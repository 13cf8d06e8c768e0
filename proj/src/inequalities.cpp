#include "tscalc/inequalities.hpp"

#include "tscalc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <unordered_map>

namespace tscalc {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double require_positive(double v, const char* what, double at) {
    if (!(v > 0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be positive, got " + fmt(v) + " at " + fmt(at));
    return v;
}

double require_nonnegative(double v, const char* what, double at) {
    if (!(v >= 0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be nonnegative, got " + fmt(v) + " at " + fmt(at));
    return v;
}

// Thread-safe per-point cache; identical values may be computed twice under contention.
class PointMemo {
public:
    template <class Fn>
    double get(double key, Fn&& compute) {
        {
            std::lock_guard lock(mutex_);
            if (auto it = values_.find(key); it != values_.end()) return it->second;
        }
        const double v = compute();
        std::lock_guard lock(mutex_);
        values_.emplace(key, v);
        return v;
    }

private:
    std::mutex mutex_;
    std::unordered_map<double, double> values_;
};

// x^e with the 0 * inf = 0 convention used for G^{1-p} I^p terms is handled by callers.
double powp(double base, double e) { return std::pow(base, e); }

}  // namespace

// ---------------------------------------------------------------------------

HolderPair::HolderPair(double p) : p_(p), q_(p / (p - 1.0)) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InputError("Hölder exponent p must be finite and > 1, got " + fmt(p));
}

BoundsMN::BoundsMN(double m, double M) : m_(m), M_(M) {
    if (!(m > 0) || !std::isfinite(M)) throw InputError("bounds: need 0 < m and finite M");
    if (m > M) throw InputError("bounds: m > M (" + fmt(m) + " > " + fmt(M) + ")");
}

double Kernel::operator()(double x, double y) const {
    const double v = k_(x, y);
    if (!(v >= 0) || !std::isfinite(v))
        throw InputError("kernel must be nonnegative, got " + fmt(v) + " at (" + fmt(x) + ", " + fmt(y) + ")");
    return v;
}

IneqReport make_report(double lhs, double rhs, double tolerance) {
    IneqReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.tolerance = tolerance;
    r.abs_slack = rhs - lhs;
    r.rel_slack = r.abs_slack / std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
    r.holds = report_holds(r);
    return r;
}

bool report_holds(const IneqReport& r) noexcept {
    const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1.0});
    return r.lhs <= r.rhs + r.tolerance * scale;
}

std::vector<double> sample_grid(const TimeScale& ts, double a, double b, const EvalOptions& opts) {
    const TimeScale sub = ts.restrict(a, b);
    const double step = b > a ? (b - a) * opts.grid_fraction : 1.0;
    return sub.grid(step);
}

// --- Hölder family -----------------------------------------------------------

BoundsMN auto_bounds(const TimeScale& ts, double a, double b, const ScalarField1D& f, const ScalarField1D& g,
                     HolderPair pair, const EvalOptions& opts) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double t : sample_grid(ts, a, b, opts)) {
        const double fv = require_positive(f(t), "f", t);
        const double gv = require_positive(g(t), "g", t);
        const double ratio = std::pow(fv, pair.p()) / std::pow(gv, pair.q());
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    return BoundsMN(lo, hi);
}

IneqReport reverse_holder(const TimeScale& ts, double a, double b, Alpha alpha, const ScalarField1D& f,
                          const ScalarField1D& g, HolderPair pair, std::optional<BoundsMN> bounds,
                          const EvalOptions& opts) {
    const BoundsMN mb = bounds ? *bounds : auto_bounds(ts, a, b, f, g, pair, opts);
    if (bounds) {
        for (double t : sample_grid(ts, a, b, opts)) {
            require_positive(f(t), "f", t);
            require_positive(g(t), "g", t);
        }
    }
    const auto mode = IntegralMode::diamond(alpha);
    const double p = pair.p(), q = pair.q();
    const double Ifp = integrate(ts, [&](double t) { return std::pow(require_positive(f(t), "f", t), p); }, a, b, mode, opts.quad);
    const double Igq = integrate(ts, [&](double t) { return std::pow(require_positive(g(t), "g", t), q); }, a, b, mode, opts.quad);
    const double Ifg = integrate(ts, [&](double t) { return f(t) * g(t); }, a, b, mode, opts.quad);
    const double lhs = std::pow(Ifp, 1.0 / p) * std::pow(Igq, 1.0 / q);
    const double rhs = std::pow(mb.M() / mb.m(), 1.0 / (p * q)) * Ifg;
    return make_report(lhs, rhs, opts.ineq_tol);
}

IneqReport holder_2d(const TimeScale& ts, double a, double b, Alpha alpha, const ScalarField2D& h,
                     const ScalarField2D& f, const ScalarField2D& g, HolderPair pair, const EvalOptions& opts) {
    const auto mode = IntegralMode::diamond(alpha);
    const double p = pair.p(), q = pair.q();
    const double lhs = double_integrate(
        ts, [&](double x, double y) { return std::abs(h(x, y) * f(x, y) * g(x, y)); }, a, b, mode, opts.quad);
    const double A = double_integrate(
        ts, [&](double x, double y) { return std::abs(h(x, y)) * std::pow(std::abs(f(x, y)), p); }, a, b, mode, opts.quad);
    const double B = double_integrate(
        ts, [&](double x, double y) { return std::abs(h(x, y)) * std::pow(std::abs(g(x, y)), q); }, a, b, mode, opts.quad);
    const double rhs = std::pow(A, 1.0 / p) * std::pow(B, 1.0 / q);
    return make_report(lhs, rhs, opts.ineq_tol);
}

IneqReport cauchy_schwarz_2d(const TimeScale& ts, double a, double b, Alpha alpha, const ScalarField2D& h,
                             const ScalarField2D& f, const ScalarField2D& g, const EvalOptions& opts) {
    return holder_2d(ts, a, b, alpha, h, f, g, HolderPair(2.0), opts);
}

IneqReport young(double xi, double lambda, HolderPair pair, double tolerance) {
    if (!(xi >= 0) || !(lambda >= 0)) throw InputError("young: arguments must be nonnegative");
    const double lhs = xi * lambda;
    const double rhs = std::pow(xi, pair.p()) / pair.p() + std::pow(lambda, pair.q()) / pair.q();
    return make_report(lhs, rhs, tolerance);
}

// --- Hardy family ------------------------------------------------------------

namespace {

void check_weights(const TimeScale& ts, double a, double b, const WeightPair& w, const EvalOptions& opts) {
    for (double t : sample_grid(ts, a, b, opts)) {
        require_positive(w.phi(t), "phi", t);
        require_positive(w.psi(t), "psi", t);
    }
}

struct HardyInputs {
    const TimeScale& ts;
    double a, b;
    IntegralMode mode;
    const Kernel& K;
    const WeightPair& w;
    HolderPair pair;
    const EvalOptions& opts;
};

// Shared evaluation for the plain and bounded variants; Fw/Gw are F, G or their bounds.
ReportPair hardy_core(const HardyInputs& in, const ScalarField1D& f, const ScalarField1D& g, const ScalarField1D& Fw,
                      const ScalarField1D& Gw) {
    const double p = in.pair.p(), q = in.pair.q();
    const auto& ts = in.ts;
    const double a = in.a, b = in.b;

    PointMemo inner_memo;
    auto inner = [&](double y) {
        return inner_memo.get(y, [&] {
            return integrate(ts, [&](double x) { return in.K(x, y) * require_nonnegative(f(x), "f", x); }, a, b,
                             in.mode, in.opts.quad);
        });
    };

    ReportPair out;
    const double bilinear =
        integrate(ts, [&](double y) { return require_nonnegative(g(y), "g", y) * inner(y); }, a, b, in.mode, in.opts.quad);
    const double X = integrate(
        ts,
        [&](double x) { return powp(in.w.phi(x), p) * Fw(x) * powp(require_nonnegative(f(x), "f", x), p); }, a, b,
        in.mode, in.opts.quad);
    const double Y = integrate(
        ts,
        [&](double y) { return powp(in.w.psi(y), q) * Gw(y) * powp(require_nonnegative(g(y), "g", y), q); }, a, b,
        in.mode, in.opts.quad);
    out.first = make_report(bilinear, powp(X, 1.0 / p) * powp(Y, 1.0 / q), in.opts.ineq_tol);

    const double dual = integrate(
        ts,
        [&](double y) {
            const double I = inner(y);
            const double Gv = Gw(y);
            // G(y) = 0 forces I(y) = 0 for positive weights; the term vanishes in the limit.
            if (Gv == 0.0) return I == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
            return powp(Gv, 1.0 - p) * powp(in.w.psi(y), -p) * powp(I, p);
        },
        a, b, in.mode, in.opts.quad);
    out.second = make_report(dual, X, in.opts.ineq_tol);
    return out;
}

}  // namespace

HardyWeights hardy_weights(const TimeScale& ts, double a, double b, Alpha alpha, const Kernel& K, const WeightPair& w,
                           HolderPair pair, const EvalOptions& opts) {
    check_weights(ts, a, b, w, opts);
    const auto mode = IntegralMode::diamond(alpha);
    const double p = pair.p(), q = pair.q();
    auto Fmemo = std::make_shared<PointMemo>();
    auto Gmemo = std::make_shared<PointMemo>();

    HardyWeights hw;
    hw.F = [=](double x) {
        return Fmemo->get(x, [&] {
            return integrate(ts, [&](double y) { return K(x, y) * powp(require_positive(w.psi(y), "psi", y), -p); }, a,
                             b, mode, opts.quad);
        });
    };
    hw.G = [=](double y) {
        return Gmemo->get(y, [&] {
            return integrate(ts, [&](double x) { return K(x, y) * powp(require_positive(w.phi(x), "phi", x), -q); }, a,
                             b, mode, opts.quad);
        });
    };
    return hw;
}

ReportPair hardy_pair(const TimeScale& ts, double a, double b, Alpha alpha, const Kernel& K, const ScalarField1D& f,
                      const ScalarField1D& g, const WeightPair& w, HolderPair pair, const EvalOptions& opts) {
    const HardyWeights hw = hardy_weights(ts, a, b, alpha, K, w, pair, opts);
    return hardy_core({ts, a, b, IntegralMode::diamond(alpha), K, w, pair, opts}, f, g, hw.F, hw.G);
}

ScalarField1D hardy_dual_g(const TimeScale& ts, double a, double b, Alpha alpha, const Kernel& K,
                           const ScalarField1D& f, const WeightPair& w, HolderPair pair, const EvalOptions& opts) {
    const HardyWeights hw = hardy_weights(ts, a, b, alpha, K, w, pair, opts);
    const auto mode = IntegralMode::diamond(alpha);
    const double p = pair.p();
    return [=](double y) {
        const double Gv = hw.G(y);
        if (Gv == 0.0) throw DegenerateKernelError("G(" + fmt(y) + ") = 0: dual g undefined");
        const double I = integrate(ts, [&](double x) { return K(x, y) * f(x); }, a, b, mode, opts.quad);
        return powp(Gv, 1.0 - p) * powp(w.psi(y), -p) * powp(I, p - 1.0);
    };
}

Kernel triangular_kernel(ScalarField1D h, Triangle orientation) {
    if (orientation == Triangle::Upper)
        return Kernel([h = std::move(h)](double x, double y) { return x <= y ? h(y) : 0.0; });
    return Kernel([h = std::move(h)](double x, double y) { return x > y ? h(y) : 0.0; });
}

ReportPair bounded_hardy(const TimeScale& ts, double a, double b, Alpha alpha, const Kernel& K, const ScalarField1D& f,
                         const ScalarField1D& g, const WeightPair& w, HolderPair pair, const ScalarField1D& F1,
                         const ScalarField1D& G1, const EvalOptions& opts) {
    const HardyWeights hw = hardy_weights(ts, a, b, alpha, K, w, pair, opts);
    constexpr double slack = 1e-12;
    for (double t : sample_grid(ts, a, b, opts)) {
        const double Fv = hw.F(t), F1v = F1(t);
        if (Fv > F1v + slack * std::max(1.0, std::abs(F1v)))
            throw InputError("bounded_hardy: F(" + fmt(t) + ") = " + fmt(Fv) + " exceeds F1 = " + fmt(F1v));
        const double Gv = hw.G(t), G1v = G1(t);
        if (Gv > G1v + slack * std::max(1.0, std::abs(G1v)))
            throw InputError("bounded_hardy: G(" + fmt(t) + ") = " + fmt(Gv) + " exceeds G1 = " + fmt(G1v));
    }
    return hardy_core({ts, a, b, IntegralMode::diamond(alpha), K, w, pair, opts}, f, g, F1, G1);
}

ReportPair triangular_hardy_direct(const TimeScale& ts, double a, double b, Alpha alpha, const ScalarField1D& h,
                                   Triangle orientation, const ScalarField1D& f, const ScalarField1D& g,
                                   const WeightPair& w, HolderPair pair, const EvalOptions& opts) {
    check_weights(ts, a, b, w, opts);
    const auto mode = IntegralMode::diamond(alpha);
    const auto& quad = opts.quad;
    const double p = pair.p(), q = pair.q();
    const bool upper = orientation == Triangle::Upper;

    auto H = [&](double y) { return require_nonnegative(h(y), "h", y) * powp(w.psi(y), -p); };
    auto phi_q = [&](double x) { return powp(w.phi(x), -q); };
    // Integral of fn over the part of [a, b] on the kernel's side of s.
    auto partial = [&](const ScalarField1D& fn, double s, bool from_a) {
        return from_a ? integrate(ts, fn, a, s, mode, quad) : integrate(ts, fn, s, b, mode, quad);
    };

    PointMemo f_memo, phi_memo;
    // Upper: x runs over [a, y]; lower: x over [y, b]. The weight integral over y uses the other side.
    auto inner_f = [&](double y) { return f_memo.get(y, [&] { return partial(f, y, upper); }); };
    auto inner_phi = [&](double y) { return phi_memo.get(y, [&] { return partial(phi_q, y, upper); }); };
    auto weight_H = [&](double x) { return partial(H, x, !upper); };

    ReportPair out;
    const double lhs1 = integrate(ts, [&](double y) { return h(y) * g(y) * inner_f(y); }, a, b, mode, quad);
    const double X = integrate(
        ts, [&](double x) { return powp(w.phi(x), p) * powp(require_nonnegative(f(x), "f", x), p) * weight_H(x); }, a,
        b, mode, quad);
    const double Y = integrate(
        ts,
        [&](double y) { return powp(w.psi(y), q) * powp(require_nonnegative(g(y), "g", y), q) * h(y) * inner_phi(y); },
        a, b, mode, quad);
    out.first = make_report(lhs1, powp(X, 1.0 / p) * powp(Y, 1.0 / q), opts.ineq_tol);

    const double lhs2 = integrate(
        ts,
        [&](double y) {
            const double Gv = inner_phi(y), I = inner_f(y);
            if (Gv == 0.0) return I == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
            return H(y) * powp(Gv, 1.0 - p) * powp(I, p);
        },
        a, b, mode, quad);
    out.second = make_report(lhs2, X, opts.ineq_tol);
    return out;
}

namespace {

struct GeneralParts {
    double moment_x;  // ∫_a^b M^p(f) F^p
    double moment_y;  // ∫_c^d N^q(g) G^q
    double bilinear;  // ∬ F G / L
    double dual;      // ∫ N^{-p}(g) (∫ F/L)^p
};

GeneralParts general_parts(const TimeScale& ts, Interval ab, Interval cd, Alpha alpha, const ScalarField1D& F,
                           const ScalarField1D& G, const ScalarField1D& f, const ScalarField1D& g,
                           const GeneralHardySpec& spec, HolderPair pair, const EvalOptions& opts) {
    const auto mode = IntegralMode::diamond(alpha);
    const auto& quad = opts.quad;
    const double p = pair.p(), q = pair.q();
    for (const auto& iv : {ab, cd}) {
        if (!ts.contains(iv.lo) || !ts.contains(iv.hi) || iv.lo > iv.hi)
            throw InputError("general_kernel_pair: interval endpoints must be ordered points of the time scale");
    }
    for (double t : sample_grid(ts, ab.lo, ab.hi, opts)) {
        require_positive(F(t), "F", t);
        require_positive(f(t), "f", t);
    }
    for (double t : sample_grid(ts, cd.lo, cd.hi, opts)) {
        require_positive(G(t), "G", t);
        require_positive(g(t), "g", t);
    }
    auto Lv = [&](double x, double y) {
        const double v = spec.L(f(x), g(y));
        if (!(v > 0) || !std::isfinite(v))
            throw InputError("L must be positive, got " + fmt(v) + " at (x, y) = (" + fmt(x) + ", " + fmt(y) + ")");
        return v;
    };
    auto Mv = [&](double x) { return require_positive(spec.M(f(x)), "M(f)", x); };
    auto Nv = [&](double y) { return require_positive(spec.N(g(y)), "N(g)", y); };

    GeneralParts gp{};
    gp.moment_x = integrate(ts, [&](double x) { return powp(Mv(x) * F(x), p); }, ab.lo, ab.hi, mode, quad);
    gp.moment_y = integrate(ts, [&](double y) { return powp(Nv(y) * G(y), q); }, cd.lo, cd.hi, mode, quad);
    if (!(gp.moment_x > 0) || !std::isfinite(gp.moment_x) || !(gp.moment_y > 0) || !std::isfinite(gp.moment_y))
        throw InputError("general_kernel_pair: moment integrals must be finite and positive");

    PointMemo memo;
    auto J = [&](double y) {
        return memo.get(y, [&] {
            return integrate(ts, [&](double x) { return F(x) / Lv(x, y); }, ab.lo, ab.hi, mode, quad);
        });
    };
    gp.bilinear = integrate(ts, [&](double y) { return G(y) * J(y); }, cd.lo, cd.hi, mode, quad);
    gp.dual = integrate(ts, [&](double y) { return powp(Nv(y), -p) * powp(J(y), p); }, cd.lo, cd.hi, mode, quad);
    return gp;
}

}  // namespace

ReportPair general_kernel_pair(const TimeScale& ts, Interval ab, Interval cd, Alpha alpha, const ScalarField1D& F,
                               const ScalarField1D& G, const ScalarField1D& f, const ScalarField1D& g,
                               const GeneralHardySpec& spec, HolderPair pair, const EvalOptions& opts) {
    if (!(spec.C > 0) || !std::isfinite(spec.C)) throw InputError("general_kernel_pair: C must be positive");
    const GeneralParts gp = general_parts(ts, ab, cd, alpha, F, G, f, g, spec, pair, opts);
    const double p = pair.p(), q = pair.q();
    ReportPair out;
    out.first = make_report(gp.bilinear, spec.C * powp(gp.moment_x, 1.0 / p) * powp(gp.moment_y, 1.0 / q), opts.ineq_tol);
    out.second = make_report(gp.dual, powp(spec.C, p) * gp.moment_x, opts.ineq_tol);
    return out;
}

double general_kernel_holder_constant(const TimeScale& ts, Interval ab, Interval cd, Alpha alpha,
                                      const ScalarField1D& F, const ScalarField1D& G, const ScalarField1D& f,
                                      const ScalarField1D& g, const GeneralHardySpec& spec, HolderPair pair,
                                      const EvalOptions& opts) {
    const GeneralParts gp = general_parts(ts, ab, cd, alpha, F, G, f, g, spec, pair, opts);
    return powp(gp.dual / gp.moment_x, 1.0 / pair.p());
}

std::pair<ScalarField1D, ScalarField1D> equality_witness(const WeightPair& w, HolderPair pair, double A, double B) {
    if (!(A > 0) || !(B > 0)) throw InputError("equality_witness: A and B must be positive");
    const double p = pair.p(), q = pair.q();
    const double cf = std::pow(A, 1.0 / p), cg = std::pow(B, 1.0 / q);
    const double ef = -(p + q) / p, eg = -(p + q) / q;
    ScalarField1D f = [phi = w.phi, cf, ef](double x) { return cf * std::pow(phi(x), ef); };
    ScalarField1D g = [psi = w.psi, cg, eg](double y) { return cg * std::pow(psi(y), eg); };
    return {std::move(f), std::move(g)};
}

}  // namespace tscalc
