#pragma once

#include <vector>

#include "modelset/interval_set.hpp"

namespace modelset {

/// Axis-aligned bounded box with exact endpoints and per-endpoint flags,
/// so half-open regions like [0, 100) are representable without rounding.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> axes) : axes_(std::move(axes)) {}

    static Box cube(int dim, double radius);  // [-r, r]^dim, closed
    static Box closed(const std::vector<double>& lo, const std::vector<double>& hi);
    static Box half_open(const std::vector<double>& lo, const std::vector<double>& hi);

    int dim() const { return static_cast<int>(axes_.size()); }
    const Interval& axis(int i) const { return axes_.at(i); }
    const std::vector<Interval>& axes() const { return axes_; }

    bool degenerate() const;  // some axis empty
    QuadraticNumber volume() const;

    bool contains(const std::vector<QuadraticNumber>& x,
                  BoundaryPolicy policy = BoundaryPolicy::Flags) const;
    /// Set inclusion other ⊆ this, honoring endpoint flags.
    bool contains_box(const Box& other) const;

    Box translate(const std::vector<QuadraticNumber>& t) const;
    Box intersect(const Box& other) const;
    Box inflate(double margin) const;  // closed fattening by margin on every side
    Box shrink(double margin) const;

    std::vector<double> lo_double() const;
    std::vector<double> hi_double() const;

    bool operator==(const Box& other) const;

private:
    std::vector<Interval> axes_;
};

}  // namespace modelset
