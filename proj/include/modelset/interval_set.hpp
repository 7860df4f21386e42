#pragma once

#include <vector>

#include "modelset/quadratic.hpp"

namespace modelset {

/// How boundary points of a window count during enumeration and membership.
enum class BoundaryPolicy {
    Flags,     // respect per-endpoint open/closed flags
    Interior,  // strict interior only
    Closure,   // closed hull of each component
};

struct Interval {
    QuadraticNumber lo, hi;
    bool lo_closed = true;
    bool hi_closed = true;

    bool valid() const {
        int c = (hi - lo).sign();
        return c > 0 || (c == 0 && lo_closed && hi_closed);
    }
    bool is_point() const { return lo == hi; }
    QuadraticNumber length() const { return hi - lo; }
};

/// Finite union of intervals with exact endpoints, kept sorted and disjoint.
/// All membership decisions are exact.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(Interval iv);
    explicit IntervalSet(std::vector<Interval> parts);

    static IntervalSet closed(const QuadraticNumber& lo, const QuadraticNumber& hi);
    static IntervalSet half_open(const QuadraticNumber& lo, const QuadraticNumber& hi);

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    bool contains(const QuadraticNumber& x, BoundaryPolicy policy = BoundaryPolicy::Flags) const;
    bool on_boundary(const QuadraticNumber& x) const;

    QuadraticNumber measure() const;

    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet translate(const QuadraticNumber& t) const;
    IntervalSet reflect() const;  // { -x : x in this }
    /// Minkowski difference set { a - b : a in this, b in other }.
    IntervalSet minkowski_diff(const IntervalSet& other) const;

    IntervalSet interior() const;
    IntervalSet closure() const;
    /// closure(interior()); drops isolated points, heals shared endpoints. Idempotent.
    IntervalSet regularize() const;
    bool is_regular() const;

    /// measure(this ∩ (s + this)).
    QuadraticNumber covariogram(const QuadraticNumber& s) const;

    std::vector<QuadraticNumber> boundary_points() const;

    bool has_hull() const { return !parts_.empty(); }
    QuadraticNumber hull_lo() const { return parts_.front().lo; }
    QuadraticNumber hull_hi() const { return parts_.back().hi; }
    QuadraticNumber hull_width() const;

    /// Exact set equality including endpoint flags (after normalization).
    bool operator==(const IntervalSet& other) const;

    /// Hausdorff distance between the closures; both sets must be nonempty.
    QuadraticNumber hausdorff(const IntervalSet& other) const;

private:
    void normalize();
    std::vector<Interval> parts_;
};

}  // namespace modelset
