#include "tscalc/timescale.hpp"

#include "tscalc/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tscalc {

TimeScale TimeScale::build(std::span<const Interval> intervals) {
    if (intervals.empty()) throw InputError("time scale: interval list is empty");

    std::vector<Interval> sorted(intervals.begin(), intervals.end());
    for (const auto& iv : sorted) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
            throw InputError("time scale: non-finite endpoint");
        if (iv.lo > iv.hi) {
            std::ostringstream os;
            os << "time scale: reversed interval [" << iv.lo << ", " << iv.hi << "]";
            throw InputError(os.str());
        }
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi); });

    std::vector<Interval> merged;
    merged.reserve(sorted.size());
    for (const auto& iv : sorted) {
        // Closed sets: intervals sharing an endpoint merge.
        if (!merged.empty() && iv.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
            merged.push_back(iv);
    }
    return TimeScale(std::move(merged));
}

TimeScale TimeScale::build(std::initializer_list<Interval> intervals) {
    return build(std::span<const Interval>(intervals.begin(), intervals.size()));
}

TimeScale TimeScale::build(const std::vector<std::pair<double, double>>& intervals) {
    std::vector<Interval> ivs;
    ivs.reserve(intervals.size());
    for (const auto& [lo, hi] : intervals) ivs.push_back({lo, hi});
    return build(ivs);
}

TimeScale TimeScale::integers(int first, int last) {
    if (first > last) throw InputError("time scale: empty integer range");
    std::vector<Interval> ivs;
    for (int k = first; k <= last; ++k) ivs.push_back({double(k), double(k)});
    return build(ivs);
}

std::optional<std::size_t> TimeScale::component_of(double t) const noexcept {
    // First component whose lo is > t; the candidate is the one before it.
    auto it = std::upper_bound(components_.begin(), components_.end(), t,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == components_.begin()) return std::nullopt;
    --it;
    if (!it->contains(t)) return std::nullopt;
    return static_cast<std::size_t>(it - components_.begin());
}

bool TimeScale::contains(double t) const noexcept { return component_of(t).has_value(); }

bool TimeScale::purely_discrete() const noexcept {
    return std::all_of(components_.begin(), components_.end(), [](const Interval& iv) { return iv.degenerate(); });
}

PointInfo TimeScale::point_info(double t) const {
    auto idx = component_of(t);
    if (!idx) {
        std::ostringstream os;
        os.precision(17);
        os << "point " << t << " is not in the time scale";
        throw DomainError(os.str());
    }
    const std::size_t i = *idx;
    const Interval& c = components_[i];

    PointInfo info{};
    info.t = t;
    if (t < c.hi)
        info.sigma = t;
    else
        info.sigma = (i + 1 < components_.size()) ? components_[i + 1].lo : t;

    if (t > c.lo)
        info.rho = t;
    else
        info.rho = (i > 0) ? components_[i - 1].hi : t;

    info.mu = info.sigma - t;
    info.nu = t - info.rho;
    info.right = info.mu > 0 ? RightClass::Scattered : RightClass::Dense;
    info.left = info.nu > 0 ? LeftClass::Scattered : LeftClass::Dense;
    return info;
}

namespace {

// A left-scattered maximum exists iff the last component is a point preceded by another component.
bool has_left_scattered_max(const std::vector<Interval>& cs) {
    return cs.size() > 1 && cs.back().degenerate();
}

bool has_right_scattered_min(const std::vector<Interval>& cs) {
    return cs.size() > 1 && cs.front().degenerate();
}

}  // namespace

TimeScale TimeScale::kappa_upper() const {
    if (!has_left_scattered_max(components_)) return *this;
    return TimeScale(std::vector<Interval>(components_.begin(), components_.end() - 1));
}

TimeScale TimeScale::kappa_lower() const {
    if (!has_right_scattered_min(components_)) return *this;
    return TimeScale(std::vector<Interval>(components_.begin() + 1, components_.end()));
}

std::optional<TimeScale> TimeScale::kappa_both() const {
    auto first = components_.begin();
    auto last = components_.end();
    if (has_left_scattered_max(components_)) --last;
    if (has_right_scattered_min(components_)) ++first;
    if (first >= last) return std::nullopt;
    return TimeScale(std::vector<Interval>(first, last));
}

bool TimeScale::in_kappa_upper(double t) const noexcept {
    if (!contains(t)) return false;
    return !(t == max() && has_left_scattered_max(components_));
}

bool TimeScale::in_kappa_lower(double t) const noexcept {
    if (!contains(t)) return false;
    return !(t == min() && has_right_scattered_min(components_));
}

TimeScale TimeScale::restrict(double a, double b) const {
    if (!contains(a) || !contains(b)) throw InputError("restrict: endpoints must lie in the time scale");
    if (a > b) throw InputError("restrict: a > b");
    std::vector<Interval> out;
    for (const auto& c : components_) {
        if (c.hi < a || c.lo > b) continue;
        out.push_back({std::max(c.lo, a), std::min(c.hi, b)});
    }
    return TimeScale(std::move(out));
}

std::vector<double> TimeScale::grid(double max_step) const {
    if (!(max_step > 0)) throw InputError("grid: max_step must be positive");
    std::vector<double> pts;
    for (const auto& c : components_) {
        if (c.degenerate()) {
            pts.push_back(c.lo);
            continue;
        }
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(c.length() / max_step)));
        for (std::size_t k = 0; k < n; ++k) {
            const double v = c.lo + c.length() * (double(k) / double(n));
            if (pts.empty() || v > pts.back()) pts.push_back(v);
        }
        if (c.hi > pts.back()) pts.push_back(c.hi);
    }
    return pts;
}

KappaSets kappa_restrictions(const TimeScale& ts) {
    return KappaSets{ts.kappa_upper(), ts.kappa_lower(), ts.kappa_both()};
}

}  // namespace tscalc
