#include <doctest.h>

#include "tscalc/error.hpp"
#include "tscalc/inequalities.hpp"

#include <cmath>
#include <limits>

using namespace tscalc;

namespace {

ScalarField1D constant(double c) {
    return [c](double) { return c; };
}
ScalarField2D constant2(double c) {
    return [c](double, double) { return c; };
}

const TimeScale Z02 = TimeScale::integers(0, 2);
const WeightPair unit_weights{constant(1), constant(1)};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0}); }

}  // namespace

TEST_SUITE("inequalities") {

TEST_CASE("parameter types validate") {
    CHECK(HolderPair(2).q() == 2);
    CHECK(HolderPair(3).q() == doctest::Approx(1.5));
    CHECK(std::abs(1 / HolderPair(1.7).p() + 1 / HolderPair(1.7).q() - 1) < 1e-12);
    CHECK_THROWS_AS(HolderPair(1), InputError);
    CHECK_THROWS_AS(HolderPair(0.5), InputError);
    CHECK_THROWS_AS(HolderPair(std::numeric_limits<double>::infinity()), InputError);
    CHECK_THROWS_AS(BoundsMN(2, 1), InputError);
    CHECK_THROWS_AS(BoundsMN(0, 1), InputError);
    const Kernel neg(constant2(-1));
    CHECK_THROWS_AS(neg(0, 0), InputError);
}

TEST_CASE("report holds flag follows the stated rule") {
    const auto r = make_report(1.0, 1.0 - 5e-10, 1e-9);
    CHECK(r.holds);
    CHECK(r.abs_slack == doctest::Approx(-5e-10));
    CHECK(report_holds(r));
    const auto bad = make_report(1.0, 1.0 - 2e-9, 1e-9);
    CHECK_FALSE(bad.holds);
    CHECK_FALSE(report_holds(bad));
    const auto small = make_report(1e-12, 0.0, 1e-9);  // floor of 1 in the tolerance scale
    CHECK(small.holds);
    const auto zero = make_report(0.0, 0.0, 1e-9);
    CHECK(zero.rel_slack == 0.0);
    CHECK(zero.holds);
}

TEST_CASE("reverse Hölder: constant-ratio equality") {
    const auto r = reverse_holder(Z02, 0, 2, Alpha(1), constant(1), constant(1), HolderPair(2), BoundsMN(1, 1));
    CHECK(r.lhs == doctest::Approx(2));
    CHECK(r.rhs == doctest::Approx(2));
    CHECK(r.holds);
}

TEST_CASE("reverse Hölder: hand-summed instance") {
    const ScalarField1D f = [](double t) { return t < 0.5 ? 1.0 : 2.0; };
    const auto r = reverse_holder(Z02, 0, 2, Alpha(1), f, constant(1), HolderPair(2));
    CHECK(r.lhs == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
    CHECK(r.rhs == doctest::Approx(3 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r.holds);
    const auto b = auto_bounds(Z02, 0, 2, f, constant(1), HolderPair(2));
    CHECK(b.m() == 1);
    CHECK(b.M() == 4);
}

TEST_CASE("reverse Hölder on a dense scale") {
    const auto ts = TimeScale::build({{0, 1}});
    const ScalarField1D f = [](double t) { return std::exp(t); };
    const auto r = reverse_holder(ts, 0, 1, Alpha(0.5), f, constant(1), HolderPair(2));
    // Independent classical values: ∫e^{2t} = (e^2 - 1)/2, ∫e^t = e - 1, m = 1, M = e^2.
    const double e = std::exp(1.0);
    CHECK(r.lhs == doctest::Approx(std::sqrt((e * e - 1) / 2)).epsilon(1e-9));
    CHECK(r.rhs == doctest::Approx(std::sqrt(e) * (e - 1)).epsilon(1e-9));
    CHECK(r.holds);
}

TEST_CASE("reverse Hölder rejects nonpositive functions") {
    CHECK_THROWS_AS(reverse_holder(Z02, 0, 2, Alpha(1), constant(0), constant(1), HolderPair(2)), InputError);
    CHECK_THROWS_AS(reverse_holder(Z02, 0, 2, Alpha(1), constant(1), constant(-1), HolderPair(2), BoundsMN(1, 2)),
                    InputError);
}

TEST_CASE("2D Hölder examples") {
    const auto eq = holder_2d(Z02, 0, 2, Alpha(1), constant2(1), constant2(1), constant2(1), HolderPair(2));
    CHECK(eq.lhs == 4);
    CHECK(eq.rhs == doctest::Approx(4));
    CHECK(eq.holds);

    const ScalarField2D f = [](double x, double) { return 1 + x; };
    const auto r = holder_2d(Z02, 0, 2, Alpha(1), constant2(1), f, constant2(1), HolderPair(2));
    CHECK(r.lhs == 6);
    CHECK(r.rhs == doctest::Approx(2 * std::sqrt(10.0)).epsilon(1e-14));
    CHECK(r.holds);

    const auto z = holder_2d(Z02, 0, 2, Alpha(0.5), constant2(0), f, constant2(1), HolderPair(3));
    CHECK(z.lhs == 0);
    CHECK(z.rhs == 0);
    CHECK(z.holds);
}

TEST_CASE("Cauchy-Schwarz delegates to p = 2") {
    const auto ts = TimeScale::integers(0, 3);
    const ScalarField2D h = [](double x, double y) { return 1 + 0.1 * x * y; };
    const ScalarField2D f = [](double x, double y) { return 0.5 + x - 0.2 * y; };
    const ScalarField2D g = [](double x, double y) { return 1.5 + std::sin(x + 2 * y); };
    const auto cs = cauchy_schwarz_2d(ts, 0, 3, Alpha(0.3), h, f, g);
    const auto hp = holder_2d(ts, 0, 3, Alpha(0.3), h, f, g, HolderPair(2));
    CHECK(cs.lhs == hp.lhs);
    CHECK(cs.rhs == hp.rhs);
    CHECK(cs.holds);

    const auto same = cauchy_schwarz_2d(ts, 0, 3, Alpha(0.7), h, f, f);
    CHECK(close(same.lhs, same.rhs, 1e-14));
}

TEST_CASE("Cauchy-Schwarz against a naive double sum") {
    const auto ts = TimeScale::integers(0, 3);
    const ScalarField2D f = [](double x, double y) { return 1 + x + y * y; };
    const ScalarField2D g = [](double x, double y) { return 2 - 0.3 * x + 0.1 * y; };
    double fg = 0, ff = 0, gg = 0;
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) {
            fg += f(x, y) * g(x, y);
            ff += f(x, y) * f(x, y);
            gg += g(x, y) * g(x, y);
        }
    const auto r = cauchy_schwarz_2d(ts, 0, 3, Alpha(1), constant2(1), f, g);
    CHECK(r.lhs == doctest::Approx(fg).epsilon(1e-14));
    CHECK(r.rhs == doctest::Approx(std::sqrt(ff * gg)).epsilon(1e-14));
    CHECK(r.holds);
}

TEST_CASE("Young's inequality") {
    const auto eq = young(1, 1, HolderPair(2));
    CHECK(eq.lhs == 1);
    CHECK(eq.rhs == 1);
    CHECK(eq.holds);
    const auto r = young(2, 1, HolderPair(2));
    CHECK(r.lhs == 2);
    CHECK(r.rhs == 2.5);
    const auto z = young(0, 3, HolderPair(3));
    CHECK(z.lhs == 0);
    CHECK(z.rhs == doctest::Approx(std::pow(3.0, 1.5) / 1.5));
    CHECK_THROWS_AS(young(-1, 1, HolderPair(2)), InputError);
}

TEST_CASE("Hardy weights") {
    const auto hw = hardy_weights(Z02, 0, 2, Alpha(1), Kernel(constant2(1)), unit_weights, HolderPair(2));
    for (double t : {0.0, 1.0, 2.0}) {
        CHECK(hw.F(t) == 2);
        CHECK(hw.G(t) == 2);
    }
    const auto zero = hardy_weights(Z02, 0, 2, Alpha(0.4), Kernel(constant2(0)), unit_weights, HolderPair(2));
    CHECK(zero.F(1) == 0);
    CHECK(zero.G(1) == 0);

    const auto dense = hardy_weights(TimeScale::build({{0, 1}}), 0, 1, Alpha(0.5), Kernel(constant2(1)),
                                     unit_weights, HolderPair(2));
    CHECK(std::abs(dense.F(0.25) - 1) <= 1e-10);

    CHECK_THROWS_AS(hardy_weights(Z02, 0, 2, Alpha(1), Kernel(constant2(1)), {constant(0), constant(1)}, HolderPair(2)),
                    InputError);
}

TEST_CASE("Hardy pair: the unit equality instance") {
    const auto rp = hardy_pair(Z02, 0, 2, Alpha(1), Kernel(constant2(1)), constant(1), constant(1), unit_weights,
                               HolderPair(2));
    CHECK(std::abs(rp.first.lhs - 4) <= 1e-12);
    CHECK(std::abs(rp.first.rhs - 4) <= 1e-12);
    CHECK(std::abs(rp.second.lhs - 4) <= 1e-12);
    CHECK(std::abs(rp.second.rhs - 4) <= 1e-12);
    CHECK(rp.first.holds);
    CHECK(rp.second.holds);
}

TEST_CASE("Hardy pair: zero function") {
    const auto rp = hardy_pair(Z02, 0, 2, Alpha(0.5), Kernel(constant2(1)), constant(0), constant(1), unit_weights,
                               HolderPair(3));
    CHECK(rp.first.lhs == 0);
    CHECK(rp.second.lhs == 0);
    CHECK(rp.second.rhs == 0);
    CHECK(rp.first.holds);
    CHECK(rp.second.holds);
}

TEST_CASE("Hardy pair against naive sums") {
    const auto ts = TimeScale::integers(0, 3);
    const Kernel K([](double x, double y) { return 1 / (1 + x + y); });
    const ScalarField1D f = [](double t) { return 1 + 0.3 * t; };
    const ScalarField1D g = [](double t) { return 2 - 0.4 * t; };
    const WeightPair w{[](double t) { return 1 + 0.1 * t; }, [](double t) { return 0.8 + 0.2 * t * t; }};
    const double alpha = 0.5, p = 3, q = 1.5;

    // Point masses of the half-and-half measure on {0,1,2,3} over [0, 3].
    const double mass[4] = {0.5, 1.0, 1.0, 0.5};
    auto F = [&](int x) {
        double s = 0;
        for (int y = 0; y < 4; ++y) s += mass[y] * K(x, y) * std::pow(w.psi(y), -p);
        return s;
    };
    auto G = [&](int y) {
        double s = 0;
        for (int x = 0; x < 4; ++x) s += mass[x] * K(x, y) * std::pow(w.phi(x), -q);
        return s;
    };
    double bil = 0, X = 0, Y = 0, dual = 0;
    for (int y = 0; y < 4; ++y) {
        double I = 0;
        for (int x = 0; x < 4; ++x) I += mass[x] * K(x, y) * f(x);
        bil += mass[y] * g(y) * I;
        dual += mass[y] * std::pow(G(y), 1 - p) * std::pow(w.psi(y), -p) * std::pow(I, p);
        X += mass[y] * std::pow(w.phi(y), p) * F(y) * std::pow(f(y), p);
        Y += mass[y] * std::pow(w.psi(y), q) * G(y) * std::pow(g(y), q);
    }
    const auto rp = hardy_pair(ts, 0, 3, Alpha(alpha), K, f, g, w, HolderPair(p));
    CHECK(close(rp.first.lhs, bil, 1e-13));
    CHECK(close(rp.first.rhs, std::pow(X, 1 / p) * std::pow(Y, 1 / q), 1e-13));
    CHECK(close(rp.second.lhs, dual, 1e-13));
    CHECK(close(rp.second.rhs, X, 1e-13));
    CHECK(rp.first.holds);
    CHECK(rp.second.holds);
}

TEST_CASE("dual g construction") {
    const auto g = hardy_dual_g(Z02, 0, 2, Alpha(1), Kernel(constant2(1)), constant(1), unit_weights, HolderPair(2));
    CHECK(g(0) == 1);
    CHECK(g(1) == 1);
    const auto g0 = hardy_dual_g(Z02, 0, 2, Alpha(1), Kernel(constant2(1)), constant(0), unit_weights, HolderPair(2));
    CHECK(g0(0) == 0);
    const auto gz = hardy_dual_g(Z02, 0, 2, Alpha(1), Kernel(constant2(0)), constant(1), unit_weights, HolderPair(2));
    CHECK_THROWS_AS(gz(1), DegenerateKernelError);
}

TEST_CASE("dual g makes the bilinear side equal the dual side") {
    const auto ts = TimeScale::build({{0, 0}, {0.5, 0.5}, {1.5, 1.5}, {2, 2}, {3.25, 3.25}});
    const Kernel K([](double x, double y) { return 0.5 + x * y; });
    const ScalarField1D f = [](double t) { return 1 + t; };
    const WeightPair w{[](double t) { return 1 + 0.5 * t; }, [](double t) { return 2 - 0.3 * t; }};
    const HolderPair pair(2.7);
    const auto g = hardy_dual_g(ts, 0, 3.25, Alpha(0.3), K, f, w, pair);
    const auto rp = hardy_pair(ts, 0, 3.25, Alpha(0.3), K, f, g, w, pair);
    CHECK(close(rp.first.lhs, rp.second.lhs, 1e-12));
    CHECK(rp.first.holds);
    CHECK(rp.second.holds);
}

TEST_CASE("triangular kernels") {
    const auto up = triangular_kernel(constant(1), Triangle::Upper);
    const auto lo = triangular_kernel(constant(1), Triangle::Lower);
    CHECK(up(0, 1) == 1);
    CHECK(up(1, 0) == 0);
    CHECK(up(1, 1) == 1);
    CHECK(lo(1, 0) == 1);
    CHECK(lo(0, 1) == 0);
    CHECK(lo(1, 1) == 0);
    const ScalarField1D h = [](double y) { return 1 + y * y; };
    const auto u2 = triangular_kernel(h, Triangle::Upper), l2 = triangular_kernel(h, Triangle::Lower);
    for (double x : {0.0, 0.5, 1.0})
        for (double y : {0.0, 0.5, 1.0}) CHECK(u2(x, y) + l2(x, y) == h(y));
}

TEST_CASE("triangular Hardy pairs hold") {
    const auto ts = TimeScale::integers(0, 4);
    const ScalarField1D h = [](double y) { return 1 + 0.5 * y; };
    const ScalarField1D f = [](double t) { return 2 - 0.3 * t; };
    const ScalarField1D g = [](double t) { return 0.7 + 0.2 * t; };
    for (Triangle tri : {Triangle::Upper, Triangle::Lower})
        for (double a : {0.0, 0.5, 1.0}) {
            const auto rp = hardy_pair(ts, 0, 4, Alpha(a), triangular_kernel(h, tri), f, g, unit_weights, HolderPair(2.5));
            CHECK(rp.first.holds);
            CHECK(rp.second.holds);
        }
}

// The variable-limit forms lose or gain the diagonal point masses relative to
// the kernel forms; on two points with alpha = 1 the lower form fails outright.
TEST_CASE("variable-limit triangular forms versus kernel forms") {
    const auto two = TimeScale::integers(0, 1);
    const auto direct = triangular_hardy_direct(two, 0, 1, Alpha(1), constant(1), Triangle::Lower, constant(1),
                                                constant(1), unit_weights, HolderPair(2));
    CHECK(direct.first.lhs == 1);
    CHECK(direct.first.rhs == 0);
    CHECK_FALSE(direct.first.holds);

    const auto ts = TimeScale::integers(0, 3);
    const ScalarField1D h = [](double y) { return 1 + y; };
    const ScalarField1D f = [](double t) { return 2 + t * t; };
    const ScalarField1D g = [](double t) { return 3 - 0.5 * t; };
    for (double a : {0.0, 0.3, 1.0}) {
        // Diagonal term alpha * mu(y) h g f over y in [0, 3), integrated against the diamond
        // measure: y = 0 carries mass alpha, y = 1, 2 carry mass 1.
        double diag = 0;
        for (int y = 0; y < 3; ++y) diag += (y == 0 ? a : 1.0) * a * h(y) * g(y) * f(y);
        const auto ku = hardy_pair(ts, 0, 3, Alpha(a), triangular_kernel(h, Triangle::Upper), f, g, unit_weights, HolderPair(2));
        const auto du = triangular_hardy_direct(ts, 0, 3, Alpha(a), h, Triangle::Upper, f, g, unit_weights, HolderPair(2));
        CHECK(close(ku.first.lhs - du.first.lhs, diag, 1e-12));
        const auto kl = hardy_pair(ts, 0, 3, Alpha(a), triangular_kernel(h, Triangle::Lower), f, g, unit_weights, HolderPair(2));
        const auto dl = triangular_hardy_direct(ts, 0, 3, Alpha(a), h, Triangle::Lower, f, g, unit_weights, HolderPair(2));
        CHECK(close(dl.first.lhs - kl.first.lhs, diag, 1e-12));
    }

    // On a dense scale the diagonal has measure zero and the two forms agree.
    const auto dense = TimeScale::build({{0, 1}});
    const auto k = hardy_pair(dense, 0, 1, Alpha(0.5), triangular_kernel(h, Triangle::Upper), f, g, unit_weights, HolderPair(2));
    const auto d = triangular_hardy_direct(dense, 0, 1, Alpha(0.5), h, Triangle::Upper, f, g, unit_weights, HolderPair(2));
    CHECK(close(k.first.lhs, d.first.lhs, 1e-8));
    CHECK(close(k.second.lhs, d.second.lhs, 1e-8));
}

TEST_CASE("bounded Hardy") {
    const Kernel K(constant2(1));
    const auto hw = hardy_weights(Z02, 0, 2, Alpha(1), K, unit_weights, HolderPair(2));
    const auto same = bounded_hardy(Z02, 0, 2, Alpha(1), K, constant(1), constant(1), unit_weights, HolderPair(2), hw.F, hw.G);
    const auto plain = hardy_pair(Z02, 0, 2, Alpha(1), K, constant(1), constant(1), unit_weights, HolderPair(2));
    CHECK(same.first.lhs == plain.first.lhs);
    CHECK(same.first.rhs == plain.first.rhs);
    CHECK(same.second.lhs == plain.second.lhs);
    CHECK(same.second.rhs == plain.second.rhs);

    const auto doubled = bounded_hardy(Z02, 0, 2, Alpha(1), K, constant(1), constant(1), unit_weights, HolderPair(2),
                                       constant(4), constant(4));
    CHECK(doubled.first.lhs == doctest::Approx(4));
    CHECK(doubled.first.rhs == doctest::Approx(8));
    CHECK(doubled.first.holds);
    CHECK(doubled.second.holds);

    try {
        bounded_hardy(Z02, 0, 2, Alpha(1), K, constant(1), constant(1), unit_weights, HolderPair(2),
                      [](double t) { return t == 1 ? 1.0 : 2.0; }, constant(2));
        FAIL("expected an input error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("F(1)") != std::string::npos);
    }
}

TEST_CASE("general kernel: hand instance") {
    GeneralHardySpec spec{[](double, double) { return 1.0; }, constant(1), constant(1), 2.0};
    const auto rp = general_kernel_pair(Z02, {0, 2}, {0, 2}, Alpha(1), constant(1), constant(1), constant(1),
                                        constant(1), spec, HolderPair(2));
    CHECK(std::abs(rp.first.lhs - 4) <= 1e-12);
    CHECK(std::abs(rp.first.rhs - 4) <= 1e-12);
    CHECK(std::abs(rp.second.lhs - 8) <= 1e-12);
    CHECK(std::abs(rp.second.rhs - 8) <= 1e-12);
    const double C = general_kernel_holder_constant(Z02, {0, 2}, {0, 2}, Alpha(1), constant(1), constant(1),
                                                    constant(1), constant(1), spec, HolderPair(2));
    CHECK(C == doctest::Approx(2).epsilon(1e-14));
}

TEST_CASE("general kernel: positivity and constant checks") {
    GeneralHardySpec spec{[](double, double) { return 1.0; }, constant(1), constant(1), 1.0};
    CHECK_THROWS_AS(general_kernel_pair(Z02, {0, 2}, {0, 2}, Alpha(1), constant(1), constant(1), constant(0),
                                        constant(1), spec, HolderPair(2)),
                    InputError);
    CHECK_THROWS_AS(general_kernel_pair(Z02, {0, 2}, {0, 2}, Alpha(1), constant(0), constant(1), constant(1),
                                        constant(1), spec, HolderPair(2)),
                    InputError);
    spec.C = 0;
    CHECK_THROWS_AS(general_kernel_pair(Z02, {0, 2}, {0, 2}, Alpha(1), constant(1), constant(1), constant(1),
                                        constant(1), spec, HolderPair(2)),
                    InputError);
    spec.C = 1;
    spec.L = [](double, double) { return -1.0; };
    CHECK_THROWS_AS(general_kernel_pair(Z02, {0, 2}, {0, 2}, Alpha(1), constant(1), constant(1), constant(1),
                                        constant(1), spec, HolderPair(2)),
                    InputError);
}

TEST_CASE("general kernel: separate x and y ranges with the Hölder constant") {
    const auto ts = TimeScale::build({{0, 0}, {1, 1}, {2, 3}, {4, 4}});
    GeneralHardySpec spec{[](double u, double v) { return 1 + u * v; }, [](double u) { return std::sqrt(u); },
                          [](double u) { return 0.5 + u; }, 1.0};
    const ScalarField1D F = [](double t) { return 1 + 0.1 * t; }, G = [](double t) { return 2 - 0.2 * t; };
    const ScalarField1D f = [](double t) { return 1.5 + std::sin(t); }, g = [](double t) { return 1 + 0.05 * t * t; };
    for (double a : {0.0, 0.5, 1.0}) {
        spec.C = general_kernel_holder_constant(ts, {0, 3}, {1, 4}, Alpha(a), F, G, f, g, spec, HolderPair(1.8));
        const auto rp = general_kernel_pair(ts, {0, 3}, {1, 4}, Alpha(a), F, G, f, g, spec, HolderPair(1.8));
        CHECK(rp.first.holds);
        CHECK(rp.second.holds);
        CHECK(close(rp.second.lhs, rp.second.rhs, 1e-12));
    }
}

TEST_CASE("equality witness") {
    const auto [f1, g1] = equality_witness(unit_weights, HolderPair(2), 1, 1);
    CHECK(f1(0.3) == 1);
    CHECK(g1(7) == 1);
    const auto [f4, g4] = equality_witness(unit_weights, HolderPair(2), 16, 1);
    CHECK(f4(0) == 4);
    CHECK_THROWS_AS(equality_witness(unit_weights, HolderPair(2), 0, 1), InputError);

    const WeightPair w{[](double x) { return 1 + x; }, constant(1)};
    const auto [f, g] = equality_witness(w, HolderPair(2), 3, 1);
    CHECK(f(1) == doctest::Approx(std::sqrt(3.0) / 4));
    const auto rp = hardy_pair(Z02, 0, 2, Alpha(1), Kernel(constant2(1)), f, g, w, HolderPair(2));
    CHECK(close(rp.first.lhs, rp.first.rhs, 1e-9));
}

TEST_CASE("equality witness is tight for any weights and alpha") {
    const auto ts = TimeScale::build({{0, 0}, {0.5, 1.5}, {2, 2}});
    const WeightPair w{[](double x) { return 1 + 0.4 * x; }, [](double y) { return 2 - 0.5 * y; }};
    for (double a : {0.0, 0.25, 1.0}) {
        const HolderPair pair(3.5);
        const auto [f, g] = equality_witness(w, pair, 1.7, 0.6);
        const auto rp = hardy_pair(ts, 0, 2, Alpha(a), Kernel(constant2(1.3)), f, g, w, pair);
        CHECK(std::abs(rp.first.rel_slack) <= 1e-6);
    }
}

}  // TEST_SUITE
