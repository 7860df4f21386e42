#pragma once

#include <vector>

#include "modelset/interval_set.hpp"
#include "modelset/polygon.hpp"

namespace modelset {

/// Element of the internal space H = R^d x Z/k. Real coordinates are exact
/// where representable; the cyclic label lives in [0, k).
struct InternalPoint {
    std::vector<QuadraticNumber> real;  // size d
    int label = 0;

    double coord(size_t i) const { return real[i].to_double(); }
    InternalPoint negate(int k) const;
};

/// Compact window of one colour: per cyclic label a real region, 1D as an exact
/// interval union (endpoint flags represent half-open enumeration conventions),
/// 2D as a convex polygon with floating vertices.
class Window {
public:
    Window() = default;
    static Window intervals(int k, std::vector<IntervalSet> per_label);
    static Window polygons(int k, std::vector<ConvexPolygon> per_label);

    int dim() const { return dim_; }
    int cyclic_order() const { return k_; }
    bool is_1d() const { return dim_ == 1; }

    const IntervalSet& interval_part(int label) const;
    const ConvexPolygon& polygon_part(int label) const;

    bool empty() const;
    bool has_empty_interior() const;

    /// Lebesgue-times-counting measure, before any covolume normalization.
    double measure_double() const;
    QuadraticNumber measure_exact() const;  // 1D only

    bool contains(const InternalPoint& p, BoundaryPolicy policy) const;
    bool on_boundary(const InternalPoint& p) const;
    /// Distance from p to the boundary of the window part at p's label
    /// (+inf when that part is empty).
    double boundary_distance(const InternalPoint& p) const;

    Window regularized() const;
    bool is_regular() const;

    /// theta_H(W ∩ (s+W)); labels must match after the shift, else a part
    /// contributes nothing.
    double covariogram_double(const InternalPoint& s) const;
    QuadraticNumber covariogram_exact(const InternalPoint& s) const;  // 1D only

    /// The difference window W - W.
    Window difference() const;

    Window translate(const InternalPoint& t) const;
    /// Shift every part from label l to l + c.
    Window shift_labels(int c) const;

    /// Exact equality of the closures (1D); vertex-set equality within
    /// kGeomEps (2D). Used by the stabilizer computation.
    bool closure_equals(const Window& other) const;

    /// Hull bounding box of all real parts across labels.
    void bounding_box(std::vector<double>& lo, std::vector<double>& hi) const;

    bool single_interval_per_label() const;

private:
    int dim_ = 1;
    int k_ = 1;
    std::vector<IntervalSet> parts1d_;     // indexed by label
    std::vector<ConvexPolygon> parts2d_;   // indexed by label
};

/// I = { t in H : t + W_i = W_i for all i }. For H = R^d x Z/k a nonzero real
/// translation cannot fix a compact window family (k·t_real = 0 forces
/// t_real = 0), so the stabilizer is the subgroup of pure label shifts.
/// Returns the sorted list of labels c with W_i(l - c) = W_i(l) for all i, l.
std::vector<int> window_stabilizer(const std::vector<Window>& windows);

}  // namespace modelset
