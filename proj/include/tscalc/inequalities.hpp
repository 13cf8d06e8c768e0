#pragma once

/**
 * @file inequalities.hpp
 * @brief Evaluators for Hölder- and Hardy-type diamond-alpha inequalities.
 *
 * Every evaluator computes both sides numerically and returns an IneqReport.
 * Double integrals are always iterated with x inside and y outside.
 *
 * The bilinear Hardy forms use exponent 1/q on the second factor of the right
 * side (the exponent Hölder's inequality produces); for p = q = 2 this is the
 * same as 1/p.
 */

#include "tscalc/calculus.hpp"

#include <optional>
#include <utility>

namespace tscalc {

class HolderPair {
public:
    /// q is derived as p / (p - 1). Throws InputError unless p > 1 and finite.
    explicit HolderPair(double p);
    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }

private:
    double p_;
    double q_;
};

class BoundsMN {
public:
    /// Throws InputError unless 0 < m <= M < inf.
    BoundsMN(double m, double M);
    double m() const noexcept { return m_; }
    double M() const noexcept { return M_; }

private:
    double m_;
    double M_;
};

struct WeightPair {
    ScalarField1D phi;
    ScalarField1D psi;
};

/// Nonnegative kernel. Evaluating to a negative or non-finite value throws InputError.
class Kernel {
public:
    explicit Kernel(ScalarField2D k) : k_(std::move(k)) {}
    double operator()(double x, double y) const;

private:
    ScalarField2D k_;
};

struct GeneralHardySpec {
    ScalarField2D L;   // L(f(x), g(y))
    ScalarField1D M;   // M(f(t))
    ScalarField1D N;   // N(g(t))
    double C = 1.0;
};

struct IneqReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_slack = 0.0;
    double rel_slack = 0.0;
    bool holds = true;
    double tolerance = 0.0;
};

/// Builds a report; holds iff lhs <= rhs + tolerance * max(|lhs|, |rhs|, 1).
IneqReport make_report(double lhs, double rhs, double tolerance);

/// Re-derives the `holds` flag from the numeric fields alone.
bool report_holds(const IneqReport& r) noexcept;

struct EvalOptions {
    QuadratureConfig quad{};
    double ineq_tol = 1e-9;
    /// Sample spacing (as a fraction of b - a) for grid-based checks on dense parts.
    double grid_fraction = 1.0 / 256.0;
};

struct ReportPair {
    IneqReport first;   // bilinear form: double integral against a product of norms
    IneqReport second;  // dual form: single integral of the inner integral to the p-th power
};

/// Grid of [a, b] used for positivity checks and sampled extrema.
std::vector<double> sample_grid(const TimeScale& ts, double a, double b, const EvalOptions& opts);

// --- Hölder family -----------------------------------------------------------

/// Min and max of f^p / g^q over sample_grid. Throws InputError if f or g is nonpositive there.
BoundsMN auto_bounds(const TimeScale& ts, double a, double b, const ScalarField1D& f, const ScalarField1D& g,
                     HolderPair pair, const EvalOptions& opts = {});

/// Reverse Hölder: (∫f^p)^{1/p} (∫g^q)^{1/q} <= (M/m)^{1/(pq)} ∫fg. Bounds default to auto_bounds.
IneqReport reverse_holder(const TimeScale& ts, double a, double b, Alpha alpha, const ScalarField1D& f,
                          const ScalarField1D& g, HolderPair pair, std::optional<BoundsMN> bounds = std::nullopt,
                          const EvalOptions& opts = {});

/// ∬|hfg| <= (∬|h||f|^p)^{1/p} (∬|h||g|^q)^{1/q}.
IneqReport holder_2d(const TimeScale& ts, double a, double b, Alpha alpha, const ScalarField2D& h,
                     const ScalarField2D& f, const ScalarField2D& g, HolderPair pair, const EvalOptions& opts = {});

/// holder_2d with p = q = 2.
IneqReport cauchy_schwarz_2d(const TimeScale& ts, double a, double b, Alpha alpha, const ScalarField2D& h,
                             const ScalarField2D& f, const ScalarField2D& g, const EvalOptions& opts = {});

IneqReport young(double xi, double lambda, HolderPair pair, double tolerance = 1e-9);

// --- Hardy family ------------------------------------------------------------

/// F(x) = ∫ K(x,y) psi^{-p}(y) ◇y and G(y) = ∫ K(x,y) phi^{-q}(x) ◇x, memoized per point.
struct HardyWeights {
    ScalarField1D F;
    ScalarField1D G;
};

/// Throws InputError if phi or psi is nonpositive on the sample grid (or at any evaluated point).
HardyWeights hardy_weights(const TimeScale& ts, double a, double b, Alpha alpha, const Kernel& K,
                           const WeightPair& w, HolderPair pair, const EvalOptions& opts = {});

/// first: ∬K f g <= (∫phi^p F f^p)^{1/p} (∫psi^q G g^q)^{1/q}
/// second: ∫ G^{1-p} psi^{-p} (∫K f ◇x)^p ◇y <= ∫ phi^p F f^p
ReportPair hardy_pair(const TimeScale& ts, double a, double b, Alpha alpha, const Kernel& K, const ScalarField1D& f,
                      const ScalarField1D& g, const WeightPair& w, HolderPair pair, const EvalOptions& opts = {});

/// g(y) = G^{1-p}(y) psi^{-p}(y) (∫K f ◇x)^{p-1}. Evaluation throws DegenerateKernelError where G(y) = 0.
ScalarField1D hardy_dual_g(const TimeScale& ts, double a, double b, Alpha alpha, const Kernel& K,
                           const ScalarField1D& f, const WeightPair& w, HolderPair pair, const EvalOptions& opts = {});

enum class Triangle { Upper, Lower };

/// Upper: K(x,y) = h(y) for x <= y, else 0. Lower: K(x,y) = h(y) for x > y, else 0.
Kernel triangular_kernel(ScalarField1D h, Triangle orientation);

/// hardy_pair with F, G replaced by upper bounds F1, G1. Throws InputError naming the first
/// sample point where F > F1 or G > G1.
ReportPair bounded_hardy(const TimeScale& ts, double a, double b, Alpha alpha, const Kernel& K,
                         const ScalarField1D& f, const ScalarField1D& g, const WeightPair& w, HolderPair pair,
                         const ScalarField1D& F1, const ScalarField1D& G1, const EvalOptions& opts = {});

/// The triangular-kernel inequalities written with variable integration limits
/// (∫_a^y, ∫_x^b, ...) instead of a kernel. first/second follow hardy_pair's layout.
ReportPair triangular_hardy_direct(const TimeScale& ts, double a, double b, Alpha alpha, const ScalarField1D& h,
                                   Triangle orientation, const ScalarField1D& f, const ScalarField1D& g,
                                   const WeightPair& w, HolderPair pair, const EvalOptions& opts = {});

/// x ranges over [a, b], y over [c, d].
/// first:  ∬ F(x)G(y)/L(f(x),g(y)) <= C (∫_a^b M^p(f)F^p)^{1/p} (∫_c^d N^q(g)G^q)^{1/q}
/// second: ∫_c^d N^{-p}(g(y)) (∫_a^b F/L ◇x)^p ◇y <= C^p ∫_a^b M^p(f)F^p
ReportPair general_kernel_pair(const TimeScale& ts, Interval ab, Interval cd, Alpha alpha, const ScalarField1D& F,
                               const ScalarField1D& G, const ScalarField1D& f, const ScalarField1D& g,
                               const GeneralHardySpec& spec, HolderPair pair, const EvalOptions& opts = {});

/// Smallest C for which the dual form holds: (lhs_second / ∫M^p(f)F^p)^{1/p}.
/// The bilinear form then holds with the same C by Hölder. spec.C is ignored.
double general_kernel_holder_constant(const TimeScale& ts, Interval ab, Interval cd, Alpha alpha,
                                      const ScalarField1D& F, const ScalarField1D& G, const ScalarField1D& f,
                                      const ScalarField1D& g, const GeneralHardySpec& spec, HolderPair pair,
                                      const EvalOptions& opts = {});

/// f = A^{1/p} phi^{-(p+q)/p},  g = B^{1/q} psi^{-(p+q)/q}. Throws InputError unless A, B > 0.
std::pair<ScalarField1D, ScalarField1D> equality_witness(const WeightPair& w, HolderPair pair, double A, double B);

}  // namespace tscalc
