#pragma once

/**
 * @file harness.hpp
 * @brief Seeded instance generation, an independent discrete oracle, and the
 *        property-suite runner.
 *
 * Instance i of a run draws from its own generator seeded by (seed, i), so
 * results do not depend on scheduling or thread count.
 */

#include "tscalc/inequalities.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace tscalc::harness {

enum class Check {
    ReverseHolder,
    ReverseHolderEquality,
    Holder2D,
    CauchySchwarz2D,
    HardyPair,
    HardyUpper,
    HardyLower,
    HardyTriangularDirect,
    HardyDual,
    BoundedHardy,
    GeneralKernel,
    EqualityWitness,
    Young,
    AlphaLinearity,
    OracleEquivalence,
    DerivativeRules,
    IntegralProperties,
};

const char* check_name(Check c);
std::optional<Check> check_from_name(std::string_view name);
std::vector<Check> all_checks();

/// Deterministic stream for one instance. Uniform variates are built from raw
/// 64-bit engine output so they agree across standard libraries.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t index);
    double uniform();                    // [0, 1)
    double uniform(double lo, double hi);
    int integer(int lo, int hi);         // inclusive
    bool chance(double p) { return uniform() < p; }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(integer(0, int(v.size()) - 1))]; }

private:
    std::mt19937_64 engine_;
};

// --- Function catalog --------------------------------------------------------

/// Positive one-variable catalog entry with values in [lo, hi] on [t0, t1]
/// (arguments outside [t0, t1] are clamped).
struct Fn1 {
    enum class Kind { Constant, Affine, Quadratic, Exponential, Step };
    Kind kind = Kind::Constant;
    double t0 = 0, t1 = 1, lo = 1, hi = 1;
    double c0 = 0, c1 = 0, c2 = 0, k = 1;
    std::vector<double> breaks;  // in normalized [0, 1]
    std::vector<double> levels;  // breaks.size() + 1 entries in [0, 1]

    double operator()(double t) const;
    std::string describe() const;
};

struct Fn2 {
    enum class Kind { Product, Sum, Diagonal };
    Kind kind = Kind::Product;
    Fn1 a, b;
    bool negate = false;

    double operator()(double x, double y) const;
    std::string describe() const;
};

/// Positive two-argument L(u, v) for positive u, v.
struct LFn {
    enum class Kind { MeanPlus, Product, Max, Quadratic };
    Kind kind = Kind::MeanPlus;
    double c = 1;
    double operator()(double u, double v) const;
    std::string describe() const;
};

/// Positive one-argument M(u) or N(u) for positive u.
struct MFn {
    enum class Kind { Power, Affine, Sqrt, Constant };
    Kind kind = Kind::Constant;
    double c = 1;
    double operator()(double u) const;
    std::string describe() const;
};

// --- Configuration and instances --------------------------------------------

struct FuzzConfig {
    std::uint64_t seed = 42;
    std::size_t instances = 10'000;
    int max_points = 16;       // cap on isolated points in a generated scale
    int max_components = 4;    // cap on dense components when allow_dense
    double value_lo = 0.5;
    double value_hi = 2.0;
    double p_lo = 1.1;         // p drawn from [p_lo, p_hi]
    double p_hi = 10.0;
    std::vector<double> alpha_set{0.0, 0.25, 0.3, 0.5, 0.75, 1.0};
    bool allow_dense = true;
    double dense_fraction = 0.1;  // share of instances with dense components
    std::vector<Check> checks = all_checks();
    unsigned threads = 1;
    bool shrink = true;
    EvalOptions eval{};
    /// Test-only: applied to every report before it is judged.
    std::function<void(IneqReport&)> report_hook;

    /// Throws InputError on an inconsistent configuration.
    void validate() const;
};

struct Instance {
    std::uint64_t index = 0;
    TimeScale ts = TimeScale::integers(0, 1);
    double a = 0, b = 0;
    Alpha alpha{1.0};
    HolderPair pair{2.0};

    Fn1 f, g, phi, psi, h, Fw, Gw;  // Fw, Gw: the F, G weights of the general-kernel check
    Fn2 h2, f2, g2, K;
    LFn L;
    MFn M, N;
    Interval ab{0, 0}, cd{0, 0};
    double bound_u = 0, bound_v = 0;  // F1 = F (1 + u), G1 = G (1 + v)
    double ratio_c = 1;               // constant-ratio scaling for reverse Hölder
    double witness_A = 1, witness_B = 1, witness_K = 1;
    double scale_c = 1;               // constant for linearity checks
    std::vector<std::pair<double, double>> young_pairs;
    std::uint64_t aux_seed = 0;       // drives per-check random choices
};

/// Deterministic in (cfg.seed, index).
Instance gen_instance(const FuzzConfig& cfg, std::uint64_t index);

/// Direct enumeration of alpha * sum mu f + (1 - alpha) * sum nu f over a purely
/// discrete scale. Shares no code with integrate(). Throws InputError on dense input.
double discrete_oracle(const TimeScale& ts, const ScalarField1D& f, double a, double b, double alpha);

// --- Running -----------------------------------------------------------------

struct NamedReport {
    std::string name;      // e.g. "hardy_pair.bilinear"
    IneqReport report;
    bool identity = false; // equality-type check: excluded from slack statistics
    std::string error;     // non-empty when evaluation threw
};

/// All reports one check produces on one instance (empty when not applicable).
std::vector<NamedReport> run_check(Check c, const Instance& inst, const FuzzConfig& cfg);

struct Violation {
    std::uint64_t instance = 0;
    std::string check;
    NamedReport report;
    std::vector<Interval> original_scale;
    std::vector<Interval> shrunk_scale;
};

struct CheckStats {
    std::size_t evaluated = 0;
    std::size_t violations = 0;
    double min_rel_slack = std::numeric_limits<double>::infinity();
};

struct FuzzSummary {
    std::uint64_t seed = 0;
    std::size_t total = 0;
    std::size_t reports = 0;
    std::vector<Violation> violations;
    double min_rel_slack = std::numeric_limits<double>::infinity();
    std::map<std::string, CheckStats> per_report;
    double wall_time = 0;

    bool passed() const noexcept { return violations.empty(); }
};

FuzzSummary run_suite(const FuzzConfig& cfg);

}  // namespace tscalc::harness
