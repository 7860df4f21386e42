#include "modelset/interval_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace modelset {

namespace {

// max of two lower endpoints under union ordering
bool lo_less(const Interval& a, const Interval& b) {
    int c = (a.lo - b.lo).sign();
    if (c != 0) return c < 0;
    return a.lo_closed && !b.lo_closed;  // closed endpoint starts "earlier"
}

QuadraticNumber dist_point(const QuadraticNumber& x, const std::vector<Interval>& parts) {
    // distance from x to the closed union
    QuadraticNumber best;
    bool have = false;
    for (const auto& p : parts) {
        QuadraticNumber d;
        if (x < p.lo)
            d = p.lo - x;
        else if (x > p.hi)
            d = x - p.hi;
        else
            return QuadraticNumber(0);
        if (!have || d < best) {
            best = d;
            have = true;
        }
    }
    return best;
}

}  // namespace

IntervalSet::IntervalSet(Interval iv) : parts_{std::move(iv)} { normalize(); }

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

IntervalSet IntervalSet::closed(const QuadraticNumber& lo, const QuadraticNumber& hi) {
    return IntervalSet(Interval{lo, hi, true, true});
}

IntervalSet IntervalSet::half_open(const QuadraticNumber& lo, const QuadraticNumber& hi) {
    return IntervalSet(Interval{lo, hi, true, false});
}

void IntervalSet::normalize() {
    std::vector<Interval> in;
    in.reserve(parts_.size());
    for (auto& p : parts_)
        if (p.valid()) in.push_back(std::move(p));
    std::sort(in.begin(), in.end(), lo_less);
    std::vector<Interval> out;
    for (auto& p : in) {
        if (!out.empty()) {
            Interval& last = out.back();
            int c = (p.lo - last.hi).sign();
            bool touches = c < 0 || (c == 0 && (last.hi_closed || p.lo_closed));
            if (touches) {
                int ch = (p.hi - last.hi).sign();
                if (ch > 0) {
                    last.hi = p.hi;
                    last.hi_closed = p.hi_closed;
                } else if (ch == 0) {
                    last.hi_closed = last.hi_closed || p.hi_closed;
                }
                if (p.lo == last.lo) last.lo_closed = last.lo_closed || p.lo_closed;
                continue;
            }
        }
        out.push_back(std::move(p));
    }
    parts_ = std::move(out);
}

bool IntervalSet::contains(const QuadraticNumber& x, BoundaryPolicy policy) const {
    for (const auto& p : parts_) {
        int cl = (x - p.lo).sign();
        int ch = (p.hi - x).sign();
        if (cl < 0 || ch < 0) continue;
        switch (policy) {
            case BoundaryPolicy::Flags:
                if ((cl > 0 || p.lo_closed) && (ch > 0 || p.hi_closed)) return true;
                break;
            case BoundaryPolicy::Interior:
                if (cl > 0 && ch > 0) return true;
                break;
            case BoundaryPolicy::Closure:
                return true;
        }
    }
    return false;
}

bool IntervalSet::on_boundary(const QuadraticNumber& x) const {
    for (const auto& p : parts_)
        if (x == p.lo || x == p.hi) return true;
    return false;
}

QuadraticNumber IntervalSet::measure() const {
    QuadraticNumber total(0);
    for (const auto& p : parts_) total += p.length();
    return total;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    for (const auto& a : parts_) {
        for (const auto& b : other.parts_) {
            Interval r;
            int c = (a.lo - b.lo).sign();
            if (c > 0) {
                r.lo = a.lo;
                r.lo_closed = a.lo_closed;
            } else if (c < 0) {
                r.lo = b.lo;
                r.lo_closed = b.lo_closed;
            } else {
                r.lo = a.lo;
                r.lo_closed = a.lo_closed && b.lo_closed;
            }
            c = (a.hi - b.hi).sign();
            if (c < 0) {
                r.hi = a.hi;
                r.hi_closed = a.hi_closed;
            } else if (c > 0) {
                r.hi = b.hi;
                r.hi_closed = b.hi_closed;
            } else {
                r.hi = a.hi;
                r.hi_closed = a.hi_closed && b.hi_closed;
            }
            if (r.valid()) out.push_back(std::move(r));
        }
    }
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::translate(const QuadraticNumber& t) const {
    std::vector<Interval> out = parts_;
    for (auto& p : out) {
        p.lo += t;
        p.hi += t;
    }
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::reflect() const {
    std::vector<Interval> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_)
        out.push_back(Interval{-p.hi, -p.lo, p.hi_closed, p.lo_closed});
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::minkowski_diff(const IntervalSet& other) const {
    std::vector<Interval> out;
    for (const auto& a : parts_)
        for (const auto& b : other.parts_)
            out.push_back(Interval{a.lo - b.hi, a.hi - b.lo, a.lo_closed && b.hi_closed,
                                   a.hi_closed && b.lo_closed});
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::interior() const {
    std::vector<Interval> out;
    for (const auto& p : parts_)
        if (!p.is_point()) out.push_back(Interval{p.lo, p.hi, false, false});
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::closure() const {
    std::vector<Interval> out = parts_;
    for (auto& p : out) p.lo_closed = p.hi_closed = true;
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::regularize() const {
    if (is_regular()) return *this;  // structure already regular: keep the flags
    return closure().interior().closure();
}

bool IntervalSet::is_regular() const {
    IntervalSet cl = closure();
    return cl == cl.interior().closure();
}

QuadraticNumber IntervalSet::covariogram(const QuadraticNumber& s) const {
    return intersect(translate(s)).measure();
}

std::vector<QuadraticNumber> IntervalSet::boundary_points() const {
    std::vector<QuadraticNumber> pts;
    for (const auto& p : parts_) {
        pts.push_back(p.lo);
        if (!p.is_point()) pts.push_back(p.hi);
    }
    return pts;
}

QuadraticNumber IntervalSet::hull_width() const {
    if (parts_.empty()) return QuadraticNumber(0);
    return hull_hi() - hull_lo();
}

bool IntervalSet::operator==(const IntervalSet& other) const {
    if (parts_.size() != other.parts_.size()) return false;
    for (size_t i = 0; i < parts_.size(); ++i) {
        const auto& a = parts_[i];
        const auto& b = other.parts_[i];
        if (a.lo != b.lo || a.hi != b.hi) return false;
        if (a.lo_closed != b.lo_closed || a.hi_closed != b.hi_closed) return false;
    }
    return true;
}

QuadraticNumber IntervalSet::hausdorff(const IntervalSet& other) const {
    if (parts_.empty() || other.parts_.empty())
        throw std::invalid_argument("hausdorff distance of an empty interval set");
    auto directed = [](const std::vector<Interval>& a, const std::vector<Interval>& b) {
        QuadraticNumber worst(0);
        // candidates: endpoints of a, plus midpoints of b's gaps when they land in a
        for (const auto& p : a) {
            for (const QuadraticNumber* e : {&p.lo, &p.hi}) {
                QuadraticNumber d = dist_point(*e, b);
                if (d > worst) worst = d;
            }
        }
        for (size_t i = 0; i + 1 < b.size(); ++i) {
            QuadraticNumber mid = (b[i].hi + b[i + 1].lo) / QuadraticNumber(2);
            bool inside = false;
            for (const auto& p : a)
                if (mid >= p.lo && mid <= p.hi) inside = true;
            if (inside) {
                QuadraticNumber d = dist_point(mid, b);
                if (d > worst) worst = d;
            }
        }
        return worst;
    };
    QuadraticNumber d1 = directed(parts_, other.parts_);
    QuadraticNumber d2 = directed(other.parts_, parts_);
    return d1 > d2 ? d1 : d2;
}

}  // namespace modelset
