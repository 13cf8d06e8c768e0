#include "tscalc/calculus.hpp"

#include "tscalc/error.hpp"

#include <cmath>
#include <charconv>
#include <limits>
#include <sstream>

namespace tscalc {

Alpha::Alpha(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream os;
        os << "alpha must lie in [0, 1], got " << value;
        throw InputError(os.str());
    }
}

IntegralMode IntegralMode::parse(std::string_view text) {
    if (text == "delta") return delta();
    if (text == "nabla") return nabla();
    constexpr std::string_view prefix = "diamond:";
    if (text.substr(0, prefix.size()) == prefix) {
        std::string_view num = text.substr(prefix.size());
        double v = 0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
        if (ec == std::errc() && ptr == num.data() + num.size() && !num.empty()) return diamond(Alpha(v));
    }
    throw InputError("mode must be delta, nabla or diamond:<alpha>, got '" + std::string(text) + "'");
}

std::string IntegralMode::to_string() const {
    switch (kind_) {
    case Kind::Delta: return "delta";
    case Kind::Nabla: return "nabla";
    case Kind::Diamond: break;
    }
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, alpha_.value());
    return "diamond:" + std::string(buf, ptr);
}

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0)) throw InputError("quadrature: abs_tol must be positive");
    if (max_depth <= 0) throw InputError("quadrature: max_depth must be positive");
    if (!(dense_diff_step_factor > 0)) throw InputError("quadrature: dense_diff_step_factor must be positive");
}

// ---------------------------------------------------------------------------
// Adaptive Simpson

namespace {

struct SimpsonPanel {
    double a, b, fa, fm, fb, whole;
};

double simpson_recurse(const ScalarField1D& f, const SimpsonPanel& p, double eps, int depth) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;

    // Stop at the requested accuracy, at the roundoff floor, or at the depth cap.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
    if (depth <= 0 || std::abs(delta) <= std::max(15.0 * eps, floor) || !(lm > p.a && rm < p.b))
        return left + right + delta / 15.0;

    return simpson_recurse(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * eps, depth - 1) +
           simpson_recurse(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * eps, depth - 1);
}

}  // namespace

double adaptive_simpson(const ScalarField1D& f, double lo, double hi, double tol, int max_depth) {
    if (!(hi > lo)) return 0.0;
    // A few initial panels so narrow features are not missed by the first estimate.
    constexpr int panels = 4;
    const double width = (hi - lo) / panels;
    double total = 0.0;
    double fa = f(lo);
    for (int k = 0; k < panels; ++k) {
        const double a = lo + width * k;
        const double b = (k + 1 == panels) ? hi : lo + width * (k + 1);
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        const double fb = f(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_recurse(f, {a, b, fa, fm, fb, whole}, tol / panels, max_depth);
        fa = fb;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Derivatives

namespace {

// Fourth-order one-sided stencil; dir = +1 forward, -1 backward.
double one_sided_derivative(const ScalarField1D& f, double t, double h, int dir) {
    const double s = dir * h;
    const double f0 = f(t), f1 = f(t + s), f2 = f(t + 2 * s), f3 = f(t + 3 * s), f4 = f(t + 4 * s);
    return (-25.0 * f0 + 48.0 * f1 - 36.0 * f2 + 16.0 * f3 - 3.0 * f4) / (12.0 * s);
}

double dense_derivative(const TimeScale& ts, const ScalarField1D& f, double t, const QuadratureConfig& cfg,
                        int preferred_dir) {
    const auto idx = ts.component_of(t);
    const Interval& c = ts.components()[*idx];
    if (c.degenerate())
        throw DomainError("derivative undefined at a point that is dense on neither side");
    const double h = cfg.dense_diff_step_factor * c.length();
    const double reach = 4.0 * h;
    const bool fits_forward = t + reach <= c.hi;
    const bool fits_backward = t - reach >= c.lo;
    int dir = preferred_dir;
    if (dir > 0 && !fits_forward) dir = -1;
    if (dir < 0 && !fits_backward) dir = fits_forward ? 1 : 0;
    if (dir == 0) throw DomainError("containing interval too short for the difference stencil");
    return one_sided_derivative(f, t, h, dir);
}

}  // namespace

double delta_derivative(const TimeScale& ts, const ScalarField1D& f, double t, const QuadratureConfig& cfg) {
    if (!ts.in_kappa_upper(t)) throw DomainError("delta derivative needs t in T^kappa");
    const PointInfo pi = ts.point_info(t);
    if (pi.right_scattered()) return (f(pi.sigma) - f(t)) / pi.mu;
    return dense_derivative(ts, f, t, cfg, +1);
}

double nabla_derivative(const TimeScale& ts, const ScalarField1D& f, double t, const QuadratureConfig& cfg) {
    if (!ts.in_kappa_lower(t)) throw DomainError("nabla derivative needs t in T_kappa");
    const PointInfo pi = ts.point_info(t);
    if (pi.left_scattered()) return (f(t) - f(pi.rho)) / pi.nu;
    return dense_derivative(ts, f, t, cfg, -1);
}

double differentiate(const TimeScale& ts, const ScalarField1D& f, double t, IntegralMode mode,
                     const QuadratureConfig& cfg) {
    cfg.validate();
    if (!ts.contains(t)) ts.point_info(t);  // throws the DomainError
    switch (mode.kind()) {
    case IntegralMode::Kind::Delta: return delta_derivative(ts, f, t, cfg);
    case IntegralMode::Kind::Nabla: return nabla_derivative(ts, f, t, cfg);
    case IntegralMode::Kind::Diamond: break;
    }
    if (!ts.in_kappa_both(t)) throw DomainError("diamond derivative needs t in T^kappa_kappa");
    const double a = mode.weight();
    return a * delta_derivative(ts, f, t, cfg) + (1.0 - a) * nabla_derivative(ts, f, t, cfg);
}

// ---------------------------------------------------------------------------
// Integrals

namespace {

void check_limits(const TimeScale& ts, double a, double b) {
    if (!ts.contains(a) || !ts.contains(b)) {
        std::ostringstream os;
        os.precision(17);
        os << "integration limits [" << a << ", " << b << "] must be points of the time scale";
        throw InputError(os.str());
    }
    if (a > b) throw InputError("integration limits reversed (a > b)");
}

struct IntegralParts {
    double dense = 0.0;
    double mu_sum = 0.0;  // right-scattered t in [a, b)
    double nu_sum = 0.0;  // left-scattered t in (a, b]
};

IntegralParts integral_parts(const TimeScale& ts, const ScalarField1D& f, double a, double b,
                             const QuadratureConfig& cfg) {
    IntegralParts parts;
    const auto& cs = ts.components();

    double dense_len = 0.0;
    for (const auto& c : cs) {
        const double lo = std::max(c.lo, a), hi = std::min(c.hi, b);
        if (lo < hi) dense_len += hi - lo;
    }

    for (std::size_t i = 0; i < cs.size(); ++i) {
        const Interval& c = cs[i];
        const double lo = std::max(c.lo, a), hi = std::min(c.hi, b);
        if (lo < hi) parts.dense += adaptive_simpson(f, lo, hi, cfg.abs_tol * (hi - lo) / dense_len, cfg.max_depth);

        // Each right endpoint except the last is right-scattered with sigma = next lo.
        if (i + 1 < cs.size() && c.hi >= a && c.hi < b) parts.mu_sum += (cs[i + 1].lo - c.hi) * f(c.hi);
        // Each left endpoint except the first is left-scattered with rho = previous hi.
        if (i > 0 && c.lo > a && c.lo <= b) parts.nu_sum += (c.lo - cs[i - 1].hi) * f(c.lo);
    }
    return parts;
}

}  // namespace

double integrate(const TimeScale& ts, const ScalarField1D& f, double a, double b, IntegralMode mode,
                 const QuadratureConfig& cfg) {
    cfg.validate();
    check_limits(ts, a, b);
    if (a == b) return 0.0;
    const IntegralParts p = integral_parts(ts, f, a, b, cfg);
    const double delta = p.dense + p.mu_sum;
    const double nabla = p.dense + p.nu_sum;
    switch (mode.kind()) {
    case IntegralMode::Kind::Delta: return delta;
    case IntegralMode::Kind::Nabla: return nabla;
    case IntegralMode::Kind::Diamond: break;
    }
    const double w = mode.weight();
    return w * delta + (1.0 - w) * nabla;
}

double double_integrate(const TimeScale& ts, const ScalarField2D& F, double a, double b, IntegralMode mode,
                        const QuadratureConfig& cfg) {
    check_limits(ts, a, b);
    auto inner = [&](double y) {
        return integrate(ts, [&](double x) { return F(x, y); }, a, b, mode, cfg);
    };
    return integrate(ts, inner, a, b, mode, cfg);
}

double partial_diamond(const TimeScale& ts, const ScalarField2D& F, Axis axis, double x, double y, Alpha alpha,
                       const QuadratureConfig& cfg) {
    const auto mode = IntegralMode::diamond(alpha);
    if (axis == Axis::X) {
        if (!ts.contains(y)) ts.point_info(y);
        return differentiate(ts, [&](double s) { return F(s, y); }, x, mode, cfg);
    }
    if (!ts.contains(x)) ts.point_info(x);
    return differentiate(ts, [&](double s) { return F(x, s); }, y, mode, cfg);
}

ScalarField1D compose_jump(const TimeScale& ts, ScalarField1D f, Jump which) {
    if (which == Jump::Sigma)
        return [ts, f = std::move(f)](double t) { return f(ts.sigma(t)); };
    return [ts, f = std::move(f)](double t) { return f(ts.rho(t)); };
}

}  // namespace tscalc
