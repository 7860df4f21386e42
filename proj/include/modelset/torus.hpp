#pragma once

#include <optional>

#include "modelset/autocorr.hpp"
#include "modelset/patch.hpp"
#include "modelset/scheme.hpp"

namespace modelset {

/// Element of T(Λ) = (G x H)/L~ in canonical coordinates: the fractional
/// coefficient vector against the lattice basis (half-open parallelepiped
/// fundamental domain) plus the reduced cyclic label. Equality of cosets is
/// equality of these coordinates, decided exactly.
class TorusPoint {
public:
    /// Reduce (z, label) + L~, z = physical ++ internal real coordinates.
    static TorusPoint reduce(const CutProjectScheme& scheme, std::vector<QuadraticNumber> z,
                             int label);

    const std::vector<QuadraticNumber>& frac_coeffs() const { return frac_; }
    int label() const { return label_; }
    const std::array<int64_t, 4>& reduction_witness() const { return witness_; }

    /// Canonical representative coordinates B * frac (physical ++ internal).
    std::vector<QuadraticNumber> representative(const CutProjectScheme& scheme) const;

    TorusPoint add(const CutProjectScheme& scheme, const TorusPoint& other) const;

    bool operator==(const TorusPoint& other) const;
    bool operator!=(const TorusPoint& other) const { return !(*this == other); }

private:
    std::vector<QuadraticNumber> frac_;  // in [0,1)^(n+d), exact
    int label_ = 0;
    std::array<int64_t, 4> witness_{0, 0, 0, 0};
};

/// iota(g) = (g, 0) + L~.
TorusPoint embed_iota(const CutProjectScheme& scheme, const std::vector<QuadraticNumber>& g);

struct CGammaStage {
    double radius;
    double diameter;
};

/// Certified enclosure of the internal parameter c_Γ = the single point of
/// ⋂ { phi(t) - W_i : t in Γ_i }. The 1D enclosure carries exact endpoints.
struct CGammaCertificate {
    InternalPoint c;                       // enclosure midpoint
    std::vector<CGammaStage> stages;       // strictly decreasing diameters
    size_t points_used = 0;
    double diameter = 0;
    bool reached_tol = false;
    int label = 0;                          // resolved cyclic label
    std::optional<QuadraticNumber> exact_lo, exact_hi;  // 1D hull endpoints
};

/// Incremental intersection ⋂ (phi(t) - W_i); throws InconsistentPatchError
/// when the intersection dies (the patch fits no translate of the windows).
class CGammaAccumulator {
public:
    CGammaAccumulator(const CutProjectScheme& scheme, const std::vector<Window>& windows);
    void add(const InternalPoint& phi, int colour);
    double diameter() const;  // +inf while several labels remain possible
    bool label_resolved() const;
    CGammaCertificate certificate() const;
    size_t points_used = 0;

private:
    const CutProjectScheme& scheme_;
    std::vector<Window> closed_windows_;
    bool started_ = false;
    std::vector<IntervalSet> parts1d_;
    std::vector<ConvexPolygon> parts2d_;
    int k_;
};

/// Attach exact lattice coefficients to every patch point (recovered from the
/// physical coordinates when missing). Fails when some point is not in L.
MultiSetPatch ensure_coeffs(const MultiSetPatch& p, const CutProjectScheme& scheme);

CGammaCertificate c_gamma(const MultiSetPatch& p, const CutProjectScheme& scheme,
                          const std::vector<Window>& windows, double tol);

/// c_gamma for the generating model set itself, streamed over radius-doubling
/// stages without materializing the patch. For 1D single-interval windows the
/// enclosure is pinned by the extremal star images, so only those are tracked
/// (exactly, with a long-double screen). Stops once the enclosure diameter
/// reaches tol or the stage radius exceeds max_radius.
CGammaCertificate c_gamma_streamed(const CutProjectScheme& scheme,
                                   const std::vector<Window>& windows, double tol,
                                   double max_radius);

struct GammaResult {
    TorusPoint point;
    std::vector<QuadraticNumber> alignment;  // s with s + supp(p) ⊂ L
    CGammaCertificate certificate;
    bool well_defined_checked = false;  // recomputed with a second alignment
};
/// gamma(Γ) = (-s, -c_{s+Γ}) + L~, independent of the alignment choice.
GammaResult gamma_map(const MultiSetPatch& p, const CutProjectScheme& scheme,
                      const std::vector<Window>& windows, double tol);

struct ReconstructedWindow {
    std::optional<Interval> hull_1d;             // recentred closure hull (exact)
    ConvexPolygon hull_2d;                       // recentred convex hull
    double hausdorff_gap = 0;                    // vs the declared window
    std::vector<std::pair<double, size_t>> gap_histogram;  // 1D star-image gaps
    size_t points = 0;
};
/// Closure approximant of phi(Γ_i), recentred by -c_Γ, with the Hausdorff
/// distance to the declared window.
std::vector<ReconstructedWindow> reconstruct_window(const MultiSetPatch& p,
                                                    const CutProjectScheme& scheme,
                                                    const std::vector<Window>& windows,
                                                    double tol);

struct SingularityResult {
    bool singular = false;
    std::optional<PatchPoint> witness;  // lattice point with phi(x) in c + ∂W_i
    int witness_colour = -1;
    bool exhaustive = false;  // settled by exact solve at every boundary point
};
/// X_g membership test: searches phi(L) for a point of c + ∂W_i. Exact for 1D
/// quadratic data (and then conclusive for every radius); otherwise evidence
/// up to the region.
SingularityResult singularity_test(const InternalPoint& c, const CutProjectScheme& scheme,
                                   const std::vector<Window>& windows, const Box& region);
SingularityResult singularity_test(const MultiSetPatch& p, const CutProjectScheme& scheme,
                                   const std::vector<Window>& windows, const Box& region,
                                   double tol);

struct RigidityResult {
    double epsilon = 0;       // largest grid value passing
    int grid_index = -1;      // epsilon = d_sup * 2^-(grid_index)
    size_t probes = 0;        // candidate translations examined
    bool positive = false;
};
/// Largest eps from the grid {2^-1 .. 2^-20} * d_sup such that every
/// t in P_eps ∩ probe_region satisfies (t+p) ∩ A_M = p ∩ A_M exactly.
RigidityResult local_rigidity_radius(const MultiSetPatch& p, const CutProjectScheme& scheme,
                                     const std::vector<Window>& windows, double m_radius,
                                     const Box& probe_region);

struct BoundaryOrbitResult {
    std::vector<size_t> counts;      // per colour
    std::vector<double> densities;   // counts / region volume
    bool exhaustive = false;
};
/// Counts lattice points with star image exactly on h + ∂W_i; the numerical
/// side of theta_H(∂W_i) = 0.
BoundaryOrbitResult boundary_orbit_density(const CutProjectScheme& scheme,
                                           const std::vector<Window>& windows,
                                           const InternalPoint& h, const Box& region);

}  // namespace modelset
