#include "modelset/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modelset {

namespace {

double seg_point_dist(Vec2 a, Vec2 b, Vec2 p) {
    Vec2 ab = b - a, ap = p - a;
    double len2 = ab.x * ab.x + ab.y * ab.y;
    double t = len2 > 0 ? std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0) : 0.0;
    Vec2 q{a.x + t * ab.x, a.y + t * ab.y};
    return std::hypot(p.x - q.x, p.y - q.y);
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) {
    if (vertices.size() < 3) return;
    // enforce CCW
    double a2 = 0;
    for (size_t i = 0; i < vertices.size(); ++i) {
        Vec2 p = vertices[i], q = vertices[(i + 1) % vertices.size()];
        a2 += cross(p, q);
    }
    if (a2 < 0) std::reverse(vertices.begin(), vertices.end());
    // drop duplicate and collinear vertices
    std::vector<Vec2> out;
    size_t nv = vertices.size();
    for (size_t i = 0; i < nv; ++i) {
        Vec2 prev = vertices[(i + nv - 1) % nv], cur = vertices[i], next = vertices[(i + 1) % nv];
        if (std::hypot(cur.x - prev.x, cur.y - prev.y) < kGeomEps) continue;
        if (std::abs(cross(cur - prev, next - cur)) < kGeomEps &&
            std::hypot(next.x - prev.x, next.y - prev.y) > kGeomEps)
            continue;
        out.push_back(cur);
    }
    if (out.size() >= 3) verts_ = std::move(out);
}

ConvexPolygon ConvexPolygon::hull_of(std::vector<Vec2> pts) {
    if (pts.size() < 3) return ConvexPolygon();
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    // Andrew monotone chain
    std::vector<Vec2> h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return ConvexPolygon(std::move(h));
}

double ConvexPolygon::area() const {
    double a2 = 0;
    for (size_t i = 0; i < verts_.size(); ++i)
        a2 += cross(verts_[i], verts_[(i + 1) % verts_.size()]);
    return 0.5 * a2;
}

double ConvexPolygon::inner_margin(Vec2 p) const {
    if (empty()) return -std::numeric_limits<double>::infinity();
    double margin = std::numeric_limits<double>::infinity();
    bool inside = true;
    for (size_t i = 0; i < verts_.size(); ++i) {
        Vec2 a = verts_[i], b = verts_[(i + 1) % verts_.size()];
        Vec2 e = b - a;
        double len = std::hypot(e.x, e.y);
        if (len < kGeomEps) continue;
        double signed_d = cross(e, p - a) / len;  // >0 inside for CCW
        margin = std::min(margin, signed_d);
        if (signed_d < 0) inside = false;
    }
    if (inside) return margin;
    // outside: use real distance to boundary, negated
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < verts_.size(); ++i)
        best = std::min(best, seg_point_dist(verts_[i], verts_[(i + 1) % verts_.size()], p));
    return -best;
}

bool ConvexPolygon::contains(Vec2 p, BoundaryPolicy policy, double tol) const {
    double m = inner_margin(p);
    switch (policy) {
        case BoundaryPolicy::Interior:
            return m > tol;
        case BoundaryPolicy::Closure:
        case BoundaryPolicy::Flags:  // no per-edge flags in 2D; treat as closure
            return m >= -tol;
    }
    return false;
}

ConvexPolygon ConvexPolygon::translate(Vec2 t) const {
    std::vector<Vec2> out = verts_;
    for (auto& v : out) v = v + t;
    ConvexPolygon p;
    p.verts_ = std::move(out);
    return p;
}

ConvexPolygon ConvexPolygon::reflect() const {
    // point reflection through the origin keeps the CCW orientation
    std::vector<Vec2> out;
    out.reserve(verts_.size());
    for (const auto& v : verts_) out.push_back({-v.x, -v.y});
    ConvexPolygon p;
    p.verts_ = std::move(out);
    return p;
}

ConvexPolygon ConvexPolygon::intersect(const ConvexPolygon& other) const {
    if (empty() || other.empty()) return ConvexPolygon();
    // Sutherland-Hodgman clipping of this against other's edges
    std::vector<Vec2> poly = verts_;
    for (size_t i = 0; i < other.verts_.size() && !poly.empty(); ++i) {
        Vec2 a = other.verts_[i], b = other.verts_[(i + 1) % other.verts_.size()];
        Vec2 e = b - a;
        std::vector<Vec2> next;
        for (size_t j = 0; j < poly.size(); ++j) {
            Vec2 p = poly[j], q = poly[(j + 1) % poly.size()];
            double dp = cross(e, p - a), dq = cross(e, q - a);
            if (dp >= -kGeomEps) next.push_back(p);
            if ((dp > kGeomEps && dq < -kGeomEps) || (dp < -kGeomEps && dq > kGeomEps)) {
                double t = dp / (dp - dq);
                next.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
            }
        }
        poly = std::move(next);
    }
    return ConvexPolygon(std::move(poly));
}

ConvexPolygon ConvexPolygon::minkowski_diff(const ConvexPolygon& other) const {
    if (empty() || other.empty()) return ConvexPolygon();
    ConvexPolygon neg = other.reflect();
    std::vector<Vec2> sums;
    sums.reserve(verts_.size() * neg.verts_.size());
    for (Vec2 a : verts_)
        for (Vec2 b : neg.verts_) sums.push_back(a + b);
    return hull_of(std::move(sums));
}

double ConvexPolygon::covariogram(Vec2 s) const { return intersect(translate(s)).area(); }

double ConvexPolygon::diameter() const {
    double best = 0;
    for (size_t i = 0; i < verts_.size(); ++i)
        for (size_t j = i + 1; j < verts_.size(); ++j)
            best = std::max(best,
                            std::hypot(verts_[i].x - verts_[j].x, verts_[i].y - verts_[j].y));
    return best;
}

Vec2 ConvexPolygon::centroid() const {
    double a2 = 0, cx = 0, cy = 0;
    for (size_t i = 0; i < verts_.size(); ++i) {
        Vec2 p = verts_[i], q = verts_[(i + 1) % verts_.size()];
        double c = cross(p, q);
        a2 += c;
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    if (std::abs(a2) < kGeomEps) return verts_.empty() ? Vec2{} : verts_[0];
    return {cx / (3 * a2), cy / (3 * a2)};
}

void ConvexPolygon::bounding_box(double& xlo, double& xhi, double& ylo, double& yhi) const {
    xlo = ylo = std::numeric_limits<double>::infinity();
    xhi = yhi = -std::numeric_limits<double>::infinity();
    for (Vec2 v : verts_) {
        xlo = std::min(xlo, v.x);
        xhi = std::max(xhi, v.x);
        ylo = std::min(ylo, v.y);
        yhi = std::max(yhi, v.y);
    }
}

double ConvexPolygon::hausdorff(const ConvexPolygon& other) const {
    // for convex sets the directed Hausdorff distance is attained at a vertex
    auto directed = [](const ConvexPolygon& a, const ConvexPolygon& b) {
        double worst = 0;
        for (Vec2 v : a.vertices()) {
            double m = b.inner_margin(v);
            worst = std::max(worst, m < 0 ? -m : 0.0);
        }
        return worst;
    };
    return std::max(directed(*this, other), directed(other, *this));
}

}  // namespace modelset
