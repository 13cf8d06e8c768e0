#pragma once

/**
 * @file calculus.hpp
 * @brief Delta, nabla and diamond-alpha derivatives and integrals on a TimeScale.
 *
 * Integrals split into a dense part (classical integrals over the non-degenerate
 * pieces of [a, b], computed by adaptive Simpson) and a scattered part:
 *
 *   delta:   dense + sum of mu(t) f(t) over right-scattered t in [a, b)
 *   nabla:   dense + sum of nu(t) f(t) over left-scattered  t in (a, b]
 *   diamond: alpha * delta + (1 - alpha) * nabla
 *
 * Derivatives at scattered points are exact difference quotients; at dense
 * points a fourth-order one-sided stencil that stays inside the containing
 * interval is used.
 */

#include "tscalc/timescale.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace tscalc {

using ScalarField1D = std::function<double(double)>;
using ScalarField2D = std::function<double(double, double)>;

class Alpha {
public:
    /// Throws InputError unless 0 <= value <= 1.
    explicit Alpha(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

class IntegralMode {
public:
    enum class Kind { Delta, Nabla, Diamond };

    static IntegralMode delta() { return IntegralMode(Kind::Delta, Alpha(1.0)); }
    static IntegralMode nabla() { return IntegralMode(Kind::Nabla, Alpha(0.0)); }
    static IntegralMode diamond(Alpha a) { return IntegralMode(Kind::Diamond, a); }

    /// Accepts "delta", "nabla" or "diamond:<alpha>". Throws InputError otherwise.
    static IntegralMode parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    /// Weight on the delta part: 1 for delta, 0 for nabla, alpha for diamond.
    double weight() const noexcept { return alpha_.value(); }
    std::string to_string() const;

private:
    IntegralMode(Kind k, Alpha a) : kind_(k), alpha_(a) {}
    Kind kind_;
    Alpha alpha_;
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    int max_depth = 40;
    double dense_diff_step_factor = 1e-6;

    /// Throws InputError on a nonpositive field.
    void validate() const;
};

/// Adaptive Simpson on [lo, hi] to absolute tolerance tol with recursion cap max_depth.
double adaptive_simpson(const ScalarField1D& f, double lo, double hi, double tol, int max_depth);

double delta_derivative(const TimeScale& ts, const ScalarField1D& f, double t, const QuadratureConfig& cfg = {});
double nabla_derivative(const TimeScale& ts, const ScalarField1D& f, double t, const QuadratureConfig& cfg = {});

/// Throws DomainError when t is outside the kappa set the mode needs.
double differentiate(const TimeScale& ts, const ScalarField1D& f, double t, IntegralMode mode,
                     const QuadratureConfig& cfg = {});

/// Throws InputError when a or b is not in the scale or a > b.
double integrate(const TimeScale& ts, const ScalarField1D& f, double a, double b, IntegralMode mode,
                 const QuadratureConfig& cfg = {});

/// Iterated integral: inner over x, outer over y, same mode and limits for both.
double double_integrate(const TimeScale& ts, const ScalarField2D& F, double a, double b, IntegralMode mode,
                        const QuadratureConfig& cfg = {});

enum class Axis { X = 1, Y = 2 };

/// Diamond-alpha derivative of the slice through `point` along `axis`.
double partial_diamond(const TimeScale& ts, const ScalarField2D& F, Axis axis, double x, double y, Alpha alpha,
                       const QuadratureConfig& cfg = {});

enum class Jump { Sigma, Rho };

/// f o sigma or f o rho. The returned field throws DomainError off the scale.
ScalarField1D compose_jump(const TimeScale& ts, ScalarField1D f, Jump which);

}  // namespace tscalc
