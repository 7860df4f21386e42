#include "modelset/box.hpp"

#include <stdexcept>

namespace modelset {

namespace {
Rational rational_from_double(double v) {
    // every finite double is an exact rational
    return Rational(v);
}
}  // namespace

Box Box::cube(int dim, double radius) {
    std::vector<Interval> axes;
    Rational r = rational_from_double(radius);
    for (int i = 0; i < dim; ++i)
        axes.push_back(Interval{QuadraticNumber(-r), QuadraticNumber(r), true, true});
    return Box(std::move(axes));
}

Box Box::closed(const std::vector<double>& lo, const std::vector<double>& hi) {
    if (lo.size() != hi.size()) throw std::invalid_argument("box bounds size mismatch");
    std::vector<Interval> axes;
    for (size_t i = 0; i < lo.size(); ++i)
        axes.push_back(Interval{QuadraticNumber(rational_from_double(lo[i])),
                                QuadraticNumber(rational_from_double(hi[i])), true, true});
    return Box(std::move(axes));
}

Box Box::half_open(const std::vector<double>& lo, const std::vector<double>& hi) {
    if (lo.size() != hi.size()) throw std::invalid_argument("box bounds size mismatch");
    std::vector<Interval> axes;
    for (size_t i = 0; i < lo.size(); ++i)
        axes.push_back(Interval{QuadraticNumber(rational_from_double(lo[i])),
                                QuadraticNumber(rational_from_double(hi[i])), true, false});
    return Box(std::move(axes));
}

bool Box::degenerate() const {
    if (axes_.empty()) return true;
    for (const auto& a : axes_)
        if (!a.valid()) return true;
    return false;
}

QuadraticNumber Box::volume() const {
    QuadraticNumber v(1);
    for (const auto& a : axes_) {
        if (!a.valid()) return QuadraticNumber(0);
        v *= a.length();
    }
    return v;
}

bool Box::contains(const std::vector<QuadraticNumber>& x, BoundaryPolicy policy) const {
    if (x.size() != axes_.size()) return false;
    for (size_t i = 0; i < axes_.size(); ++i) {
        const auto& a = axes_[i];
        int cl = (x[i] - a.lo).sign();
        int ch = (a.hi - x[i]).sign();
        if (cl < 0 || ch < 0) return false;
        switch (policy) {
            case BoundaryPolicy::Flags:
                if ((cl == 0 && !a.lo_closed) || (ch == 0 && !a.hi_closed)) return false;
                break;
            case BoundaryPolicy::Interior:
                if (cl == 0 || ch == 0) return false;
                break;
            case BoundaryPolicy::Closure:
                break;
        }
    }
    return true;
}

bool Box::contains_box(const Box& other) const {
    if (other.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        const auto& a = axes_[i];
        const auto& b = other.axes_[i];
        if (!b.valid()) continue;  // empty axis trivially contained
        int cl = (b.lo - a.lo).sign();
        if (cl < 0 || (cl == 0 && b.lo_closed && !a.lo_closed)) return false;
        int ch = (a.hi - b.hi).sign();
        if (ch < 0 || (ch == 0 && b.hi_closed && !a.hi_closed)) return false;
    }
    return true;
}

Box Box::translate(const std::vector<QuadraticNumber>& t) const {
    if (t.size() != axes_.size()) throw std::invalid_argument("translation dim mismatch");
    std::vector<Interval> axes = axes_;
    for (size_t i = 0; i < axes.size(); ++i) {
        axes[i].lo += t[i];
        axes[i].hi += t[i];
    }
    return Box(std::move(axes));
}

Box Box::intersect(const Box& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("box dim mismatch");
    std::vector<Interval> axes;
    for (int i = 0; i < dim(); ++i) {
        IntervalSet s = IntervalSet(axes_[i]).intersect(IntervalSet(other.axes_[i]));
        if (s.empty()) {
            axes.push_back(Interval{QuadraticNumber(0), QuadraticNumber(-1), true, true});
        } else {
            axes.push_back(s.parts().front());
        }
    }
    return Box(std::move(axes));
}

Box Box::inflate(double margin) const {
    QuadraticNumber m{rational_from_double(margin)};
    std::vector<Interval> axes = axes_;
    for (auto& a : axes) {
        a.lo -= m;
        a.hi += m;
        a.lo_closed = a.hi_closed = true;
    }
    return Box(std::move(axes));
}

Box Box::shrink(double margin) const { return inflate(-margin); }

std::vector<double> Box::lo_double() const {
    std::vector<double> v;
    for (const auto& a : axes_) v.push_back(a.lo.to_double());
    return v;
}

std::vector<double> Box::hi_double() const {
    std::vector<double> v;
    for (const auto& a : axes_) v.push_back(a.hi.to_double());
    return v;
}

bool Box::operator==(const Box& other) const {
    if (other.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        const auto& a = axes_[i];
        const auto& b = other.axes_[i];
        if (a.lo != b.lo || a.hi != b.hi || a.lo_closed != b.lo_closed ||
            a.hi_closed != b.hi_closed)
            return false;
    }
    return true;
}

}  // namespace modelset
