#pragma once

#include <vector>

#include "modelset/interval_set.hpp"  // BoundaryPolicy

namespace modelset {

struct Vec2 {
    double x = 0, y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Geometric tolerance for 2D window operations (vertices are floating point).
inline constexpr double kGeomEps = 1e-9;

/// Convex polygon, CCW vertex order, floating-point vertices.
class ConvexPolygon {
public:
    ConvexPolygon() = default;
    explicit ConvexPolygon(std::vector<Vec2> vertices);  // cleans duplicates/collinear

    static ConvexPolygon hull_of(std::vector<Vec2> points);

    const std::vector<Vec2>& vertices() const { return verts_; }
    bool empty() const { return verts_.size() < 3; }

    double area() const;
    bool contains(Vec2 p, BoundaryPolicy policy = BoundaryPolicy::Closure,
                  double tol = kGeomEps) const;
    /// Signed distance-like margin: >0 strictly inside, <0 outside, ~0 on boundary.
    double inner_margin(Vec2 p) const;
    double boundary_distance(Vec2 p) const { return std::abs(inner_margin(p)); }

    ConvexPolygon translate(Vec2 t) const;
    ConvexPolygon reflect() const;  // { -v }
    ConvexPolygon intersect(const ConvexPolygon& other) const;
    /// Minkowski sum of this and -other (difference set), both convex.
    ConvexPolygon minkowski_diff(const ConvexPolygon& other) const;

    /// area(this ∩ (s + this)).
    double covariogram(Vec2 s) const;

    double diameter() const;
    Vec2 centroid() const;
    void bounding_box(double& xlo, double& xhi, double& ylo, double& yhi) const;

    double hausdorff(const ConvexPolygon& other) const;

private:
    std::vector<Vec2> verts_;
};

}  // namespace modelset
