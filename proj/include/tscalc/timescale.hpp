#pragma once

/**
 * @file timescale.hpp
 * @brief Time scales that are finite unions of closed bounded intervals.
 *
 * A degenerate interval [t, t] is an isolated point, so purely discrete
 * scales, intervals, and hybrids share one representation. Membership is
 * decided by exact comparison against the stored endpoints: callers pass
 * points exactly as they appear in the component list.
 *
 * Jump operators follow the usual clamping convention at the extremes:
 * sigma(max) = max and rho(min) = min.
 */

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tscalc {

struct Interval {
    double lo;
    double hi;

    bool degenerate() const noexcept { return lo == hi; }
    double length() const noexcept { return hi - lo; }
    bool contains(double t) const noexcept { return lo <= t && t <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

enum class RightClass { Dense, Scattered };
enum class LeftClass { Dense, Scattered };

struct PointInfo {
    double t;
    double sigma;
    double rho;
    double mu;  // sigma - t
    double nu;  // t - rho
    RightClass right;
    LeftClass left;

    bool right_scattered() const noexcept { return right == RightClass::Scattered; }
    bool left_scattered() const noexcept { return left == LeftClass::Scattered; }
    bool isolated() const noexcept { return right_scattered() && left_scattered(); }
    bool dense() const noexcept { return !right_scattered() && !left_scattered(); }
};

class TimeScale {
public:
    /// Sorts, merges touching or overlapping intervals, and validates.
    /// Throws InputError on an empty list, a reversed pair, or a non-finite endpoint.
    static TimeScale build(std::span<const Interval> intervals);
    static TimeScale build(std::initializer_list<Interval> intervals);
    static TimeScale build(const std::vector<std::pair<double, double>>& intervals);

    /// {first, first+1, ..., last} as isolated points.
    static TimeScale integers(int first, int last);

    const std::vector<Interval>& components() const noexcept { return components_; }
    double min() const noexcept { return components_.front().lo; }
    double max() const noexcept { return components_.back().hi; }

    bool contains(double t) const noexcept;
    bool purely_discrete() const noexcept;
    /// Number of isolated points plus dense components.
    std::size_t size() const noexcept { return components_.size(); }

    /// Throws DomainError when t is not a point of the scale.
    PointInfo point_info(double t) const;
    double sigma(double t) const { return point_info(t).sigma; }
    double rho(double t) const { return point_info(t).rho; }

    /// Index of the component containing t, or nullopt.
    std::optional<std::size_t> component_of(double t) const noexcept;

    /// T^kappa: drops a left-scattered maximum.
    TimeScale kappa_upper() const;
    /// T_kappa: drops a right-scattered minimum.
    TimeScale kappa_lower() const;
    /// T^kappa_kappa; empty when the scale is two isolated points.
    std::optional<TimeScale> kappa_both() const;

    bool in_kappa_upper(double t) const noexcept;
    bool in_kappa_lower(double t) const noexcept;
    bool in_kappa_both(double t) const noexcept { return in_kappa_upper(t) && in_kappa_lower(t); }

    /// [a, b] intersected with the scale. Requires a, b in T with a <= b.
    TimeScale restrict(double a, double b) const;

    /// Every isolated point and component endpoint, plus interior samples of
    /// each dense component no more than max_step apart. Strictly increasing.
    std::vector<double> grid(double max_step) const;

    friend bool operator==(const TimeScale&, const TimeScale&) = default;

private:
    explicit TimeScale(std::vector<Interval> components) : components_(std::move(components)) {}

    std::vector<Interval> components_;
};

struct KappaSets {
    TimeScale upper;                  // T^kappa
    TimeScale lower;                  // T_kappa
    std::optional<TimeScale> both;    // T^kappa_kappa
};

KappaSets kappa_restrictions(const TimeScale& ts);

}  // namespace tscalc
