#include "modelset/window.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace modelset {

InternalPoint InternalPoint::negate(int k) const {
    InternalPoint out;
    out.real.reserve(real.size());
    for (const auto& r : real) out.real.push_back(-r);
    out.label = ((-label) % k + k) % k;
    return out;
}

Window Window::intervals(int k, std::vector<IntervalSet> per_label) {
    if (k < 1 || per_label.size() != static_cast<size_t>(k))
        throw std::invalid_argument("window needs one part per cyclic label");
    Window w;
    w.dim_ = 1;
    w.k_ = k;
    w.parts1d_ = std::move(per_label);
    return w;
}

Window Window::polygons(int k, std::vector<ConvexPolygon> per_label) {
    if (k < 1 || per_label.size() != static_cast<size_t>(k))
        throw std::invalid_argument("window needs one part per cyclic label");
    Window w;
    w.dim_ = 2;
    w.k_ = k;
    w.parts2d_ = std::move(per_label);
    return w;
}

const IntervalSet& Window::interval_part(int label) const {
    return parts1d_.at(((label % k_) + k_) % k_);
}

const ConvexPolygon& Window::polygon_part(int label) const {
    return parts2d_.at(((label % k_) + k_) % k_);
}

bool Window::empty() const {
    if (dim_ == 1) {
        for (const auto& p : parts1d_)
            if (!p.empty()) return false;
    } else {
        for (const auto& p : parts2d_)
            if (!p.empty()) return false;
    }
    return true;
}

bool Window::has_empty_interior() const {
    if (dim_ == 1) {
        for (const auto& p : parts1d_)
            if (!p.interior().empty()) return false;
        return true;
    }
    for (const auto& p : parts2d_)
        if (p.area() > kGeomEps) return false;
    return true;
}

double Window::measure_double() const {
    if (dim_ == 1) return measure_exact().to_double();
    double m = 0;
    for (const auto& p : parts2d_) m += p.area();
    return m;
}

QuadraticNumber Window::measure_exact() const {
    if (dim_ != 1) throw std::logic_error("exact measure is 1D only");
    QuadraticNumber m(0);
    for (const auto& p : parts1d_) m += p.measure();
    return m;
}

bool Window::contains(const InternalPoint& p, BoundaryPolicy policy) const {
    if (dim_ == 1) return interval_part(p.label).contains(p.real[0], policy);
    return polygon_part(p.label).contains({p.coord(0), p.coord(1)}, policy);
}

bool Window::on_boundary(const InternalPoint& p) const {
    if (dim_ == 1) return interval_part(p.label).on_boundary(p.real[0]);
    return std::abs(polygon_part(p.label).inner_margin({p.coord(0), p.coord(1)})) <= kGeomEps;
}

double Window::boundary_distance(const InternalPoint& p) const {
    if (dim_ == 1) {
        const auto& part = interval_part(p.label);
        if (part.empty()) return std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : part.boundary_points())
            best = std::min(best, std::abs((p.real[0] - b).to_double()));
        return best;
    }
    const auto& poly = polygon_part(p.label);
    if (poly.empty()) return std::numeric_limits<double>::infinity();
    return poly.boundary_distance({p.coord(0), p.coord(1)});
}

Window Window::regularized() const {
    Window w = *this;
    if (dim_ == 1)
        for (auto& p : w.parts1d_) p = p.regularize();
    // 2D polygons are regular by construction; vertex cleanup happened already
    return w;
}

bool Window::is_regular() const {
    if (dim_ != 1) return true;
    for (const auto& p : parts1d_)
        if (!p.is_regular()) return false;
    return true;
}

double Window::covariogram_double(const InternalPoint& s) const {
    if (dim_ == 1) return covariogram_exact(s).to_double();
    double total = 0;
    for (int l = 0; l < k_; ++l) {
        const auto& a = polygon_part(l);
        const auto& b = polygon_part(l - s.label);
        if (a.empty() || b.empty()) continue;
        total += a.intersect(b.translate({s.coord(0), s.coord(1)})).area();
    }
    return total;
}

QuadraticNumber Window::covariogram_exact(const InternalPoint& s) const {
    if (dim_ != 1) throw std::logic_error("exact covariogram is 1D only");
    QuadraticNumber total(0);
    for (int l = 0; l < k_; ++l) {
        const auto& a = interval_part(l);
        const auto& b = interval_part(l - s.label);
        if (a.empty() || b.empty()) continue;
        total += a.intersect(b.translate(s.real[0])).measure();
    }
    return total;
}

Window Window::difference() const {
    if (dim_ == 1) {
        std::vector<IntervalSet> parts(k_);
        for (int l1 = 0; l1 < k_; ++l1)
            for (int l2 = 0; l2 < k_; ++l2) {
                const auto& a = interval_part(l1);
                const auto& b = interval_part(l2);
                if (a.empty() || b.empty()) continue;
                int lab = ((l1 - l2) % k_ + k_) % k_;
                auto d = a.minkowski_diff(b);
                std::vector<Interval> merged = parts[lab].parts();
                for (const auto& iv : d.parts()) merged.push_back(iv);
                parts[lab] = IntervalSet(std::move(merged));
            }
        return intervals(k_, std::move(parts));
    }
    std::vector<ConvexPolygon> parts(k_);
    for (int l1 = 0; l1 < k_; ++l1)
        for (int l2 = 0; l2 < k_; ++l2) {
            const auto& a = polygon_part(l1);
            const auto& b = polygon_part(l2);
            if (a.empty() || b.empty()) continue;
            int lab = ((l1 - l2) % k_ + k_) % k_;
            auto d = a.minkowski_diff(b);
            if (parts[lab].empty()) {
                parts[lab] = d;
            } else {
                std::vector<Vec2> all = parts[lab].vertices();
                for (Vec2 v : d.vertices()) all.push_back(v);
                parts[lab] = ConvexPolygon::hull_of(std::move(all));
            }
        }
    return polygons(k_, std::move(parts));
}

Window Window::translate(const InternalPoint& t) const {
    Window w = shift_labels(t.label);
    if (dim_ == 1) {
        for (auto& p : w.parts1d_) p = p.translate(t.real[0]);
    } else {
        for (auto& p : w.parts2d_) p = p.translate({t.coord(0), t.coord(1)});
    }
    return w;
}

Window Window::shift_labels(int c) const {
    Window w = *this;
    if (dim_ == 1) {
        for (int l = 0; l < k_; ++l) w.parts1d_[l] = interval_part(l - c);
    } else {
        for (int l = 0; l < k_; ++l) w.parts2d_[l] = polygon_part(l - c);
    }
    return w;
}

bool Window::closure_equals(const Window& other) const {
    if (dim_ != other.dim_ || k_ != other.k_) return false;
    if (dim_ == 1) {
        for (int l = 0; l < k_; ++l)
            if (!(parts1d_[l].closure() == other.parts1d_[l].closure())) return false;
        return true;
    }
    for (int l = 0; l < k_; ++l) {
        const auto& a = parts2d_[l].vertices();
        const auto& b = other.parts2d_[l].vertices();
        if (a.size() != b.size()) return false;
        if (a.empty()) continue;
        // match cyclic rotation
        bool any = false;
        for (size_t off = 0; off < b.size() && !any; ++off) {
            bool ok = true;
            for (size_t i = 0; i < a.size(); ++i) {
                Vec2 d = a[i] - b[(i + off) % b.size()];
                if (std::hypot(d.x, d.y) > kGeomEps) {
                    ok = false;
                    break;
                }
            }
            any = ok;
        }
        if (!any) return false;
    }
    return true;
}

void Window::bounding_box(std::vector<double>& lo, std::vector<double>& hi) const {
    lo.assign(dim_, std::numeric_limits<double>::infinity());
    hi.assign(dim_, -std::numeric_limits<double>::infinity());
    if (dim_ == 1) {
        for (const auto& p : parts1d_) {
            if (p.empty()) continue;
            lo[0] = std::min(lo[0], p.hull_lo().to_double());
            hi[0] = std::max(hi[0], p.hull_hi().to_double());
        }
    } else {
        for (const auto& p : parts2d_) {
            if (p.empty()) continue;
            double xl, xh, yl, yh;
            p.bounding_box(xl, xh, yl, yh);
            lo[0] = std::min(lo[0], xl);
            hi[0] = std::max(hi[0], xh);
            lo[1] = std::min(lo[1], yl);
            hi[1] = std::max(hi[1], yh);
        }
    }
}

bool Window::single_interval_per_label() const {
    if (dim_ != 1) return false;
    for (const auto& p : parts1d_)
        if (p.parts().size() > 1) return false;
    return true;
}

std::vector<int> window_stabilizer(const std::vector<Window>& windows) {
    if (windows.empty()) return {0};
    int k = windows.front().cyclic_order();
    std::vector<int> stab;
    for (int c = 0; c < k; ++c) {
        bool fixes_all = true;
        for (const auto& w : windows) {
            if (!w.shift_labels(c).closure_equals(w)) {
                fixes_all = false;
                break;
            }
        }
        if (fixes_all) stab.push_back(c);
    }
    return stab;
}

}  // namespace modelset
