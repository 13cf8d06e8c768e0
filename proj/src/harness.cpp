#include "tscalc/harness.hpp"

#include "tscalc/error.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <thread>

namespace tscalc::harness {

namespace {

constexpr std::array<std::pair<Check, const char*>, 17> kCheckNames{{
    {Check::ReverseHolder, "reverse_holder"},
    {Check::ReverseHolderEquality, "reverse_holder_equality"},
    {Check::Holder2D, "holder_2d"},
    {Check::CauchySchwarz2D, "cauchy_schwarz_2d"},
    {Check::HardyPair, "hardy_pair"},
    {Check::HardyUpper, "hardy_upper"},
    {Check::HardyLower, "hardy_lower"},
    {Check::HardyTriangularDirect, "hardy_triangular_direct"},
    {Check::HardyDual, "hardy_dual"},
    {Check::BoundedHardy, "bounded_hardy"},
    {Check::GeneralKernel, "general_kernel"},
    {Check::EqualityWitness, "equality_witness"},
    {Check::Young, "young"},
    {Check::AlphaLinearity, "alpha_linearity"},
    {Check::OracleEquivalence, "oracle_equivalence"},
    {Check::DerivativeRules, "derivative_rules"},
    {Check::IntegralProperties, "integral_properties"},
}};

}  // namespace

const char* check_name(Check c) {
    for (const auto& [k, n] : kCheckNames)
        if (k == c) return n;
    return "?";
}

std::optional<Check> check_from_name(std::string_view name) {
    for (const auto& [k, n] : kCheckNames)
        if (name == n) return k;
    return std::nullopt;
}

std::vector<Check> all_checks() {
    std::vector<Check> out;
    for (const auto& [k, n] : kCheckNames) out.push_back(k);
    return out;
}

// --- Rng ---------------------------------------------------------------------

Rng::Rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index), std::uint32_t(index >> 32)};
    engine_.seed(seq);
}

double Rng::uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::integer(int lo, int hi) {
    const auto span = std::uint64_t(std::int64_t(hi) - lo + 1);
    return int(std::int64_t(lo) + std::int64_t(engine_() % span));
}

// --- Config ------------------------------------------------------------------

void FuzzConfig::validate() const {
    if (max_points < 2 || max_points > 16) throw InputError("max_points must be in [2, 16]");
    if (max_components < 1) throw InputError("max_components must be positive");
    if (!(value_lo > 0) || !(value_hi >= value_lo) || !std::isfinite(value_hi))
        throw InputError("value range must satisfy 0 < lo <= hi < inf");
    if (!(p_lo > 1) || !(p_hi >= p_lo) || !std::isfinite(p_hi)) throw InputError("p range must satisfy 1 < lo <= hi < inf");
    if (alpha_set.empty()) throw InputError("alpha_set must be nonempty");
    for (double a : alpha_set) Alpha{a};
    if (!(dense_fraction >= 0 && dense_fraction <= 1)) throw InputError("dense_fraction must be in [0, 1]");
    eval.quad.validate();
    if (!(eval.ineq_tol >= 0)) throw InputError("ineq_tol must be nonnegative");
}

// --- Generation --------------------------------------------------------------

namespace {

Fn1 random_fn(Rng& rng, double t0, double t1, double lo, double hi, bool allow_step) {
    Fn1 fn;
    fn.t0 = t0;
    fn.t1 = t1;
    fn.lo = lo;
    fn.hi = hi;
    const int kinds = allow_step ? 5 : 4;
    fn.kind = static_cast<Fn1::Kind>(rng.integer(0, kinds - 1));
    fn.c0 = rng.uniform();
    fn.c1 = rng.uniform();
    fn.c2 = rng.uniform();
    if (fn.kind == Fn1::Kind::Exponential) {
        fn.k = rng.uniform(0.1, 2.0) * (rng.chance(0.5) ? 1 : -1);
    }
    if (fn.kind == Fn1::Kind::Step) {
        const int n = rng.integer(1, 3);
        for (int i = 0; i < n; ++i) fn.breaks.push_back(rng.uniform());
        std::sort(fn.breaks.begin(), fn.breaks.end());
        for (int i = 0; i <= n; ++i) fn.levels.push_back(rng.uniform());
    }
    return fn;
}

Fn2 random_fn2(Rng& rng, double t0, double t1, double lo, double hi, bool allow_step, bool allow_negate) {
    Fn2 fn;
    fn.kind = static_cast<Fn2::Kind>(rng.integer(0, 2));
    fn.a = random_fn(rng, t0, t1, lo, hi, allow_step);
    fn.b = random_fn(rng, t0, t1, lo, hi, allow_step);
    fn.negate = allow_negate && rng.chance(0.25);
    return fn;
}

TimeScale random_discrete(Rng& rng, int max_points) {
    static const std::vector<int> dens{1, 2, 3, 4, 5, 8};
    const int n = rng.integer(2, max_points);
    const int den = rng.pick(dens);
    std::set<int> ks;
    while (int(ks.size()) < n) ks.insert(rng.integer(0, 3 * n));
    std::vector<Interval> iv;
    for (int k : ks) {
        const double t = double(k) / den;
        iv.push_back({t, t});
    }
    return TimeScale::build(iv);
}

// Mixed scale with endpoints on multiples of 1/64.
TimeScale random_hybrid(Rng& rng, int max_points, int max_components) {
    const int ncomp = rng.integer(1, max_components);
    const int npts = rng.integer(0, std::min(max_points, 4));
    std::vector<bool> dense(std::size_t(ncomp + npts), false);
    for (int i = 0; i < ncomp; ++i) dense[std::size_t(i)] = true;
    for (std::size_t i = dense.size(); i > 1; --i) std::swap(dense[i - 1], dense[std::size_t(rng.integer(0, int(i) - 1))]);

    std::vector<Interval> iv;
    int cursor = 0;
    for (bool d : dense) {
        cursor += rng.integer(4, 32);
        if (d) {
            const int len = rng.integer(8, 64);
            iv.push_back({cursor / 64.0, (cursor + len) / 64.0});
            cursor += len;
        } else {
            iv.push_back({cursor / 64.0, cursor / 64.0});
        }
    }
    return TimeScale::build(iv);
}

// Isolated points and component endpoints, ascending.
std::vector<double> anchors(const TimeScale& ts) {
    std::vector<double> out;
    for (const auto& c : ts.components()) {
        out.push_back(c.lo);
        if (!c.degenerate()) out.push_back(c.hi);
    }
    return out;
}

std::pair<double, double> random_limits(Rng& rng, const TimeScale& ts) {
    if (rng.chance(0.7)) return {ts.min(), ts.max()};
    const auto an = anchors(ts);
    int i = rng.integer(0, int(an.size()) - 1);
    int j = rng.integer(0, int(an.size()) - 2);
    if (j >= i) ++j;
    if (i > j) std::swap(i, j);
    return {an[std::size_t(i)], an[std::size_t(j)]};
}

}  // namespace

Instance gen_instance(const FuzzConfig& cfg, std::uint64_t index) {
    Rng rng(cfg.seed, index);
    Instance inst;
    inst.index = index;
    const bool dense = cfg.allow_dense && rng.chance(cfg.dense_fraction);
    inst.ts = dense ? random_hybrid(rng, cfg.max_points, cfg.max_components) : random_discrete(rng, cfg.max_points);
    std::tie(inst.a, inst.b) = random_limits(rng, inst.ts);
    inst.alpha = Alpha(rng.pick(cfg.alpha_set));
    inst.pair = HolderPair(rng.uniform(cfg.p_lo, cfg.p_hi));

    const double t0 = inst.ts.min(), t1 = inst.ts.max();
    const double lo = cfg.value_lo, hi = cfg.value_hi;
    const bool step = !dense;
    for (Fn1* fn : {&inst.f, &inst.g, &inst.phi, &inst.psi, &inst.h, &inst.Fw, &inst.Gw})
        *fn = random_fn(rng, t0, t1, lo, hi, step);
    inst.h2 = random_fn2(rng, t0, t1, lo, hi, step, true);
    inst.f2 = random_fn2(rng, t0, t1, lo, hi, step, true);
    inst.g2 = random_fn2(rng, t0, t1, lo, hi, step, true);
    inst.K = random_fn2(rng, t0, t1, lo, hi, step, false);

    inst.L.kind = static_cast<LFn::Kind>(rng.integer(0, 3));
    inst.L.c = rng.uniform(0.5, 2.0);
    inst.M.kind = static_cast<MFn::Kind>(rng.integer(0, 3));
    inst.M.c = inst.M.kind == MFn::Kind::Power ? rng.uniform(-2.0, 2.0) : rng.uniform(0.5, 2.0);
    inst.N.kind = static_cast<MFn::Kind>(rng.integer(0, 3));
    inst.N.c = inst.N.kind == MFn::Kind::Power ? rng.uniform(-2.0, 2.0) : rng.uniform(0.5, 2.0);

    inst.ab = {inst.a, inst.b};
    if (rng.chance(0.5)) {
        inst.cd = inst.ab;
    } else {
        const auto [c, d] = random_limits(rng, inst.ts);
        inst.cd = {c, d};
    }

    inst.bound_u = rng.uniform(0.0, 0.5);
    inst.bound_v = rng.uniform(0.0, 0.5);
    inst.ratio_c = rng.uniform(0.5, 2.0);
    inst.witness_A = rng.uniform(0.5, 2.0);
    inst.witness_B = rng.uniform(0.5, 2.0);
    inst.witness_K = rng.uniform(0.5, 2.0);
    inst.scale_c = rng.uniform(-2.0, 2.0);
    for (int i = 0; i < 4; ++i) inst.young_pairs.emplace_back(rng.uniform(0.01, 10.0), rng.uniform(0.01, 10.0));
    inst.aux_seed = std::uint64_t(rng.integer(0, 1 << 30)) << 20 | std::uint64_t(rng.integer(0, (1 << 20) - 1));
    return inst;
}

// --- Oracle ------------------------------------------------------------------

double discrete_oracle(const TimeScale& ts, const ScalarField1D& f, double a, double b, double alpha) {
    std::vector<double> pts;
    for (const auto& c : ts.components()) {
        if (!c.degenerate()) throw InputError("discrete_oracle: time scale has a dense component");
        pts.push_back(c.lo);
    }
    if (std::find(pts.begin(), pts.end(), a) == pts.end() || std::find(pts.begin(), pts.end(), b) == pts.end() || a > b)
        throw InputError("discrete_oracle: limits must be ordered points of the time scale");

    double delta_sum = 0.0, nabla_sum = 0.0;
    for (double t : pts) {
        if (t < a || t > b) continue;
        // Forward and backward neighbours by brute force over the whole point set.
        double next = t, prev = t;
        for (double s : pts) {
            if (s > t && (next == t || s < next)) next = s;
            if (s < t && (prev == t || s > prev)) prev = s;
        }
        if (t < b) delta_sum += (next - t) * f(t);
        if (t > a) nabla_sum += (t - prev) * f(t);
    }
    return alpha * delta_sum + (1.0 - alpha) * nabla_sum;
}

// --- Checks ------------------------------------------------------------------

namespace {

NamedReport inequality(std::string name, const IneqReport& r) { return {std::move(name), r, false, {}}; }

// Two-sided agreement of a and b within tol * max(|a|, |b|, floor).
NamedReport identity(std::string name, double a, double b, double tol, double floor = 1.0) {
    IneqReport r = make_report(a, b, tol);
    r.holds = std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), floor});
    return {std::move(name), r, true, {}};
}

// Like identity, but scale is supplied by the caller.
NamedReport identity_scaled(std::string name, double a, double b, double tol, double scale) {
    IneqReport r = make_report(a, b, tol);
    r.holds = std::abs(a - b) <= tol * scale;
    return {std::move(name), r, true, {}};
}

void add_pair(std::vector<NamedReport>& out, const std::string& base, const ReportPair& rp) {
    out.push_back(inequality(base + ".bilinear", rp.first));
    out.push_back(inequality(base + ".dual", rp.second));
}

ScalarField1D as_field(const Fn1& fn) { return [fn](double t) { return fn(t); }; }
ScalarField2D as_field(const Fn2& fn) { return [fn](double x, double y) { return fn(x, y); }; }

bool is_dense(const Instance& inst) { return !inst.ts.purely_discrete(); }

std::vector<double> scale_points(const TimeScale& ts) {
    std::vector<double> out;
    for (const auto& c : ts.components())
        if (c.degenerate()) out.push_back(c.lo);
    return out;
}

void check_reverse_holder(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    out.push_back(inequality("reverse_holder",
                             reverse_holder(in.ts, in.a, in.b, in.alpha, as_field(in.f), as_field(in.g), in.pair,
                                            std::nullopt, cfg.eval)));
}

void check_reverse_holder_equality(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    const double p = in.pair.p(), q = in.pair.q(), c = in.ratio_c;
    const Fn1 g = in.g;
    ScalarField1D f = [g, c, p, q](double t) { return std::pow(c * std::pow(g(t), q), 1.0 / p); };
    const IneqReport r = reverse_holder(in.ts, in.a, in.b, in.alpha, f, as_field(g), in.pair, std::nullopt, cfg.eval);
    out.push_back(inequality("reverse_holder.constant_ratio", r));
    out.push_back(identity("reverse_holder.equality", r.lhs, r.rhs, 1e-9));
}

void check_holder_2d(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    out.push_back(inequality("holder_2d", holder_2d(in.ts, in.a, in.b, in.alpha, as_field(in.h2), as_field(in.f2),
                                                    as_field(in.g2), in.pair, cfg.eval)));
}

void check_cauchy_schwarz(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    const auto h = as_field(in.h2), f = as_field(in.f2), g = as_field(in.g2);
    const IneqReport cs = cauchy_schwarz_2d(in.ts, in.a, in.b, in.alpha, h, f, g, cfg.eval);
    const IneqReport hp = holder_2d(in.ts, in.a, in.b, in.alpha, h, f, g, HolderPair(2.0), cfg.eval);
    out.push_back(inequality("cauchy_schwarz_2d", cs));
    out.push_back(identity("cauchy_schwarz_2d.lhs_matches_holder", cs.lhs, hp.lhs, 1e-15, 0.0));
    out.push_back(identity("cauchy_schwarz_2d.rhs_matches_holder", cs.rhs, hp.rhs, 1e-15, 0.0));
}

WeightPair weights(const Instance& in) { return {as_field(in.phi), as_field(in.psi)}; }

void check_hardy_pair(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    const Kernel K(as_field(in.K));
    add_pair(out, "hardy_pair",
             hardy_pair(in.ts, in.a, in.b, in.alpha, K, as_field(in.f), as_field(in.g), weights(in), in.pair, cfg.eval));
}

void check_hardy_triangle(const Instance& in, const FuzzConfig& cfg, Triangle tri, std::vector<NamedReport>& out) {
    const Kernel K = triangular_kernel(as_field(in.h), tri);
    add_pair(out, tri == Triangle::Upper ? "hardy_upper" : "hardy_lower",
             hardy_pair(in.ts, in.a, in.b, in.alpha, K, as_field(in.f), as_field(in.g), weights(in), in.pair, cfg.eval));
}

// The variable-limit forms differ from the kernel forms on the bilinear side by
// exactly the diagonal point masses alpha * mu(y) * h(y) g(y) f(y), y in [a, b).
// They are not judged as inequalities: on scattered points they can fail.
void check_triangular_direct(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    const auto h = as_field(in.h), f = as_field(in.f), g = as_field(in.g);
    const auto w = weights(in);
    const auto mode = IntegralMode::diamond(in.alpha);
    const double alpha = in.alpha.value();
    const double b = in.b;
    const TimeScale& ts = in.ts;
    const double diag = integrate(
        ts,
        [&](double y) {
            const double mu = y < b ? ts.point_info(y).mu : 0.0;
            return alpha * mu * h(y) * g(y) * f(y);
        },
        in.a, in.b, mode, cfg.eval.quad);

    for (Triangle tri : {Triangle::Upper, Triangle::Lower}) {
        const ReportPair direct = triangular_hardy_direct(ts, in.a, in.b, in.alpha, h, tri, f, g, w, in.pair, cfg.eval);
        const ReportPair kern =
            hardy_pair(ts, in.a, in.b, in.alpha, triangular_kernel(h, tri), f, g, w, in.pair, cfg.eval);
        const double gap = tri == Triangle::Upper ? kern.first.lhs - direct.first.lhs : direct.first.lhs - kern.first.lhs;
        out.push_back(identity_scaled(tri == Triangle::Upper ? "triangular_direct.upper.diagonal"
                                                             : "triangular_direct.lower.diagonal",
                                      gap, diag, 1e-10,
                                      std::max({std::abs(kern.first.lhs), std::abs(direct.first.lhs), 1.0})));
    }
}

void check_hardy_dual(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    const Kernel K(as_field(in.K));
    const auto w = weights(in);
    const auto f = as_field(in.f);
    const ScalarField1D g = hardy_dual_g(in.ts, in.a, in.b, in.alpha, K, f, w, in.pair, cfg.eval);
    const ReportPair rp = hardy_pair(in.ts, in.a, in.b, in.alpha, K, f, g, w, in.pair, cfg.eval);
    add_pair(out, "hardy_dual", rp);
    out.push_back(identity("hardy_dual.bilinear_equals_dual", rp.first.lhs, rp.second.lhs, 1e-10));

    const HardyWeights hw = hardy_weights(in.ts, in.a, in.b, in.alpha, K, w, in.pair, cfg.eval);
    const double q = in.pair.q();
    const double moment = integrate(
        in.ts, [&](double y) { return std::pow(w.psi(y), q) * hw.G(y) * std::pow(g(y), q); }, in.a, in.b,
        IntegralMode::diamond(in.alpha), cfg.eval.quad);
    out.push_back(identity("hardy_dual.moment_equals_dual", moment, rp.second.lhs, 1e-10));
}

void check_bounded_hardy(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    const Kernel K(as_field(in.K));
    const auto w = weights(in);
    const HardyWeights hw = hardy_weights(in.ts, in.a, in.b, in.alpha, K, w, in.pair, cfg.eval);
    const double u = in.bound_u, v = in.bound_v;
    ScalarField1D F1 = [F = hw.F, u](double x) { return F(x) * (1.0 + u); };
    ScalarField1D G1 = [G = hw.G, v](double y) { return G(y) * (1.0 + v); };
    add_pair(out, "bounded_hardy",
             bounded_hardy(in.ts, in.a, in.b, in.alpha, K, as_field(in.f), as_field(in.g), w, in.pair, F1, G1,
                           cfg.eval));
}

void check_general_kernel(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    GeneralHardySpec spec;
    spec.L = [L = in.L](double u, double v) { return L(u, v); };
    spec.M = [M = in.M](double u) { return M(u); };
    spec.N = [N = in.N](double u) { return N(u); };
    const auto F = as_field(in.Fw), G = as_field(in.Gw), f = as_field(in.f), g = as_field(in.g);
    spec.C = general_kernel_holder_constant(in.ts, in.ab, in.cd, in.alpha, F, G, f, g, spec, in.pair, cfg.eval);
    add_pair(out, "general_kernel",
             general_kernel_pair(in.ts, in.ab, in.cd, in.alpha, F, G, f, g, spec, in.pair, cfg.eval));
}

void check_equality_witness(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    const double k = in.witness_K;
    const Kernel K([k](double, double) { return k; });
    const auto w = weights(in);
    const auto [f, g] = equality_witness(w, in.pair, in.witness_A, in.witness_B);
    const ReportPair rp = hardy_pair(in.ts, in.a, in.b, in.alpha, K, f, g, w, in.pair, cfg.eval);
    add_pair(out, "equality_witness", rp);
    out.push_back(identity("equality_witness.tight", rp.first.lhs, rp.first.rhs, 1e-6, 0.0));
}

void check_young(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    for (std::size_t i = 0; i < in.young_pairs.size(); ++i) {
        const auto [xi, lambda] = in.young_pairs[i];
        out.push_back(inequality("young", young(xi, lambda, in.pair, cfg.eval.ineq_tol)));
    }
    const double xi = in.young_pairs.front().first;
    const IneqReport eq = young(xi, std::pow(xi, in.pair.p() - 1.0), in.pair, cfg.eval.ineq_tol);
    out.push_back(inequality("young", eq));
    out.push_back(identity("young.equality", eq.lhs, eq.rhs, 1e-12));
}

void check_alpha_linearity(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    const auto f = as_field(in.f);
    const auto& q = cfg.eval.quad;
    const double d = integrate(in.ts, f, in.a, in.b, IntegralMode::delta(), q);
    const double n = integrate(in.ts, f, in.a, in.b, IntegralMode::nabla(), q);
    const double a = in.alpha.value();
    const double dia = integrate(in.ts, f, in.a, in.b, IntegralMode::diamond(in.alpha), q);
    out.push_back(identity("alpha_linearity", dia, a * d + (1 - a) * n, 1e-12));
    out.push_back(identity("alpha_linearity.delta_endpoint",
                           integrate(in.ts, f, in.a, in.b, IntegralMode::diamond(Alpha(1.0)), q), d, 0.0, 0.0));
    out.push_back(identity("alpha_linearity.nabla_endpoint",
                           integrate(in.ts, f, in.a, in.b, IntegralMode::diamond(Alpha(0.0)), q), n, 0.0, 0.0));
}

void check_oracle(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    if (is_dense(in)) return;
    const auto f = as_field(in.f);
    for (double a : {0.0, 0.3, 0.5, 1.0, in.alpha.value()}) {
        const double got = integrate(in.ts, f, in.a, in.b, IntegralMode::diamond(Alpha(a)), cfg.eval.quad);
        const double want = discrete_oracle(in.ts, f, in.a, in.b, a);
        out.push_back(identity("oracle_equivalence", got, want, 1e-12));
    }
}

void check_derivatives(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    if (is_dense(in)) return;
    const auto f = as_field(in.f), g = as_field(in.g);
    const double c = in.scale_c;
    const ScalarField1D sum = [&](double t) { return f(t) + g(t); };
    const ScalarField1D scaled = [&](double t) { return c * f(t); };
    const ScalarField1D prod = [&](double t) { return f(t) * g(t); };
    const auto& q = cfg.eval.quad;
    const double alpha = in.alpha.value();
    const auto mode = IntegralMode::diamond(in.alpha);
    constexpr double tol = 1e-10;

    for (double t : scale_points(in.ts)) {
        if (!in.ts.in_kappa_both(t)) continue;
        const PointInfo pi = in.ts.point_info(t);
        const double fd = delta_derivative(in.ts, f, t, q), fn = nabla_derivative(in.ts, f, t, q);
        const double gd = delta_derivative(in.ts, g, t, q), gn = nabla_derivative(in.ts, g, t, q);
        const double fdi = differentiate(in.ts, f, t, mode, q), gdi = differentiate(in.ts, g, t, mode, q);

        out.push_back(identity("derivative_rules.diamond_combination", fdi, alpha * fd + (1 - alpha) * fn, 0.0, 0.0));

        const double s = differentiate(in.ts, sum, t, mode, q);
        out.push_back(identity_scaled("derivative_rules.sum", s, fdi + gdi, tol,
                                      std::max({std::abs(s), std::abs(fdi) + std::abs(gdi), 1.0})));

        const double m = differentiate(in.ts, scaled, t, mode, q);
        out.push_back(identity_scaled("derivative_rules.constant_multiple", m, c * fdi, tol,
                                      std::max({std::abs(m), std::abs(c * fdi), 1.0})));

        const double pr = differentiate(in.ts, prod, t, mode, q);
        const double t1 = fdi * g(t), t2 = alpha * f(pi.sigma) * gd, t3 = (1 - alpha) * f(pi.rho) * gn;
        out.push_back(identity_scaled("derivative_rules.product", pr, t1 + t2 + t3, tol,
                                      std::max({std::abs(pr), std::abs(t1) + std::abs(t2) + std::abs(t3), 1.0})));
    }
}

void check_integral_properties(const Instance& in, const FuzzConfig& cfg, std::vector<NamedReport>& out) {
    const auto f = as_field(in.f), g = as_field(in.g);
    const auto mode = IntegralMode::diamond(in.alpha);
    const auto& q = cfg.eval.quad;
    const TimeScale& ts = in.ts;
    const double a = in.a, b = in.b, c = in.scale_c;
    constexpr double tol = 1e-10;
    auto I = [&](const ScalarField1D& fn, double lo, double hi) { return integrate(ts, fn, lo, hi, mode, q); };

    const double If = I(f, a, b), Ig = I(g, a, b);
    const double Isum = I([&](double t) { return f(t) + g(t); }, a, b);
    out.push_back(identity_scaled("integral_properties.additive_integrand", Isum, If + Ig, tol,
                                  std::max({std::abs(Isum), std::abs(If) + std::abs(Ig), 1.0})));
    const double Ic = I([&](double t) { return c * f(t); }, a, b);
    out.push_back(identity("integral_properties.homogeneous", Ic, c * If, tol));

    // Split at a random scale point of [a, b].
    Rng rng(in.aux_seed, 0);
    const auto pts = ts.restrict(a, b).grid(std::max(b - a, 1.0) / 8);
    const double m = pts[std::size_t(rng.integer(0, int(pts.size()) - 1))];
    const double left = I(f, a, m), right = I(f, m, b);
    out.push_back(identity_scaled("integral_properties.interval_additive", If, left + right, tol,
                                  std::max({std::abs(If), std::abs(left) + std::abs(right), 1.0})));

    out.push_back(inequality("integral_properties.nonnegative", make_report(0.0, If, tol)));
    // g + f >= g pointwise since f > 0.
    out.push_back(inequality("integral_properties.monotone", make_report(Ig, Isum, tol)));

    if (is_dense(in)) return;
    // Zero iff vanishing on the support of the measure: points of [a, b] with
    // positive mass alpha * mu [t < b] + (1 - alpha) * nu [t > a].
    const double alpha = in.alpha.value();
    std::vector<double> nonzero;
    for (double t : scale_points(ts))
        if (t >= a && t <= b && rng.chance(0.3)) nonzero.push_back(t);
    const ScalarField1D z = [&](double t) {
        return std::find(nonzero.begin(), nonzero.end(), t) != nonzero.end() ? f(t) : 0.0;
    };
    bool support_zero = true;
    for (double t : nonzero) {
        const PointInfo pi = ts.point_info(t);
        const double mass = alpha * (t < b ? pi.mu : 0.0) + (1 - alpha) * (t > a ? pi.nu : 0.0);
        if (mass > 0) support_zero = false;
    }
    const double Iz = I(z, a, b);
    IneqReport r = make_report(Iz, 0.0, 0.0);
    r.holds = (Iz == 0.0) == support_zero && Iz >= 0.0;
    out.push_back({"integral_properties.zero_iff_vanishing", r, true, {}});
}

}  // namespace

std::vector<NamedReport> run_check(Check c, const Instance& inst, const FuzzConfig& cfg) {
    std::vector<NamedReport> out;
    try {
        switch (c) {
        case Check::ReverseHolder: check_reverse_holder(inst, cfg, out); break;
        case Check::ReverseHolderEquality: check_reverse_holder_equality(inst, cfg, out); break;
        case Check::Holder2D: check_holder_2d(inst, cfg, out); break;
        case Check::CauchySchwarz2D: check_cauchy_schwarz(inst, cfg, out); break;
        case Check::HardyPair: check_hardy_pair(inst, cfg, out); break;
        case Check::HardyUpper: check_hardy_triangle(inst, cfg, Triangle::Upper, out); break;
        case Check::HardyLower: check_hardy_triangle(inst, cfg, Triangle::Lower, out); break;
        case Check::HardyTriangularDirect: check_triangular_direct(inst, cfg, out); break;
        case Check::HardyDual: check_hardy_dual(inst, cfg, out); break;
        case Check::BoundedHardy: check_bounded_hardy(inst, cfg, out); break;
        case Check::GeneralKernel: check_general_kernel(inst, cfg, out); break;
        case Check::EqualityWitness: check_equality_witness(inst, cfg, out); break;
        case Check::Young: check_young(inst, cfg, out); break;
        case Check::AlphaLinearity: check_alpha_linearity(inst, cfg, out); break;
        case Check::OracleEquivalence: check_oracle(inst, cfg, out); break;
        case Check::DerivativeRules: check_derivatives(inst, cfg, out); break;
        case Check::IntegralProperties: check_integral_properties(inst, cfg, out); break;
        }
    } catch (const std::exception& e) {
        NamedReport nr;
        nr.name = check_name(c);
        nr.report.holds = false;
        nr.error = e.what();
        out.push_back(std::move(nr));
    }
    if (cfg.report_hook)
        for (auto& nr : out) cfg.report_hook(nr.report);
    return out;
}

// --- Running -----------------------------------------------------------------

namespace {

bool failed(const NamedReport& r) { return !r.error.empty() || !r.report.holds; }

bool still_fails(Check c, const Instance& inst, const FuzzConfig& cfg, const std::string& name) {
    for (const auto& r : run_check(c, inst, cfg))
        if (r.name == name && failed(r)) return true;
    return false;
}

// Drops one component at a time while the named report keeps failing.
std::vector<Interval> shrink(Check c, Instance inst, const FuzzConfig& cfg, const std::string& name) {
    const std::vector<double> keep{inst.a, inst.b, inst.cd.lo, inst.cd.hi};
    bool progress = true;
    while (progress && inst.ts.size() > 2) {
        progress = false;
        const auto comps = inst.ts.components();
        for (std::size_t i = 0; i < comps.size(); ++i) {
            std::vector<Interval> trial;
            for (std::size_t j = 0; j < comps.size(); ++j)
                if (j != i) trial.push_back(comps[j]);
            Instance cand = inst;
            cand.ts = TimeScale::build(trial);
            if (!std::all_of(keep.begin(), keep.end(), [&](double t) { return cand.ts.contains(t); })) continue;
            if (still_fails(c, cand, cfg, name)) {
                inst = std::move(cand);
                progress = true;
                break;
            }
        }
    }
    return inst.ts.components();
}

struct InstanceResult {
    std::vector<std::pair<Check, NamedReport>> reports;
    std::vector<Violation> violations;
};

InstanceResult run_instance(const FuzzConfig& cfg, std::uint64_t index) {
    InstanceResult res;
    const Instance inst = gen_instance(cfg, index);
    for (Check c : cfg.checks) {
        for (auto& r : run_check(c, inst, cfg)) {
            if (failed(r)) {
                Violation v;
                v.instance = index;
                v.check = check_name(c);
                v.report = r;
                v.original_scale = inst.ts.components();
                v.shrunk_scale = cfg.shrink ? shrink(c, inst, cfg, r.name) : v.original_scale;
                res.violations.push_back(std::move(v));
            }
            res.reports.emplace_back(c, std::move(r));
        }
    }
    return res;
}

}  // namespace

FuzzSummary run_suite(const FuzzConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    FuzzSummary sum;
    sum.seed = cfg.seed;
    sum.total = cfg.instances;

    std::vector<InstanceResult> results(cfg.instances);
    const unsigned nthreads = std::max(1u, std::min<unsigned>(cfg.threads, unsigned(std::max<std::size_t>(cfg.instances, 1))));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.instances; i = next++) results[i] = run_instance(cfg, i);
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }

    for (auto& res : results) {
        for (auto& [c, r] : res.reports) {
            ++sum.reports;
            auto& st = sum.per_report[r.name];
            ++st.evaluated;
            if (failed(r)) ++st.violations;
            if (!r.identity && r.error.empty() && std::isfinite(r.report.rel_slack)) {
                st.min_rel_slack = std::min(st.min_rel_slack, r.report.rel_slack);
                sum.min_rel_slack = std::min(sum.min_rel_slack, r.report.rel_slack);
            }
        }
        for (auto& v : res.violations) sum.violations.push_back(std::move(v));
        res = {};
    }
    sum.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sum;
}

}  // namespace tscalc::harness
