#pragma once

#include <optional>

#include <nlohmann/json.hpp>

#include "modelset/patch.hpp"
#include "modelset/scheme.hpp"

namespace modelset {

/// Nested averaging boxes A_j = [-r_j, r_j]^n with a strictly increasing,
/// unbounded-by-intent radius schedule; the default doubles each step, which
/// gives the van Hove property for boxes.
class AveragingSequence {
public:
    AveragingSequence(int dim, std::vector<double> radii);
    static AveragingSequence doubling(int dim, double first, int count);
    /// Doubling schedule whose last radius is exactly r_last.
    static AveragingSequence geometric_to(int dim, double r_last, int count);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(radii_.size()); }
    double radius(int j) const { return radii_.at(j); }
    Box box(int j) const { return Box::cube(dim_, radii_.at(j)); }

private:
    int dim_;
    std::vector<double> radii_;
};

/// theta(∂^K A_j) / theta(A_j) in closed form for boxes, with
/// ∂^K(A) = ((K+A) \ A°) ∪ ((-K + closure(complement A)) ∩ A).
double vanhove_ratio(const AveragingSequence& seq, const Box& k_box, int j);

struct DeloneRadii {
    double packing = 0;        // r: half the minimum observed gap
    double covering = 0;       // R: half the maximum gap (1D) / grid estimate (2D)
    bool degenerate = false;   // fewer than two points; covering = region radius
};
std::vector<DeloneRadii> delone_radii(const MultiSetPatch& p);

struct FlcClass {
    Cluster cluster;
    int multiplicity = 0;
};
/// Distinct recentred clusters (x+K) ∩ p over anchors x with x+K inside the
/// region, under exact translation equality.
std::vector<FlcClass> flc_catalog(const MultiSetPatch& p, const Box& k_box);

struct RepetitivityReport {
    std::vector<double> returns;  // valid return vectors (1D: sorted values)
    double max_gap = 0;
    size_t checked = 0;
};
/// Return vectors t with p ∩ B = (t+p) ∩ B for the cluster box B = anchor + K,
/// anchor the origin-nearest point; gap of the return set is the repetitivity
/// evidence.
RepetitivityReport repetitivity_gap(const MultiSetPatch& p, const Box& k_box);

/// On-patch difference set (Λ_i - Λ_i) ∩ core for one colour, as exact points
/// (with lattice coefficients when the patch carries them). When scheme and
/// windows are given, candidates come from enumerating the difference window,
/// which avoids the quadratic pair scan.
std::vector<PatchPoint> patch_difference_set(const MultiSetPatch& p, int colour, const Box& core,
                                             const CutProjectScheme* scheme = nullptr,
                                             const Window* difference_window = nullptr);

struct MeyerWitness {
    std::vector<PatchPoint> j_set;  // finite J with Δ_i ∩ core ⊆ Λ_i + J on-patch
    size_t delta_count = 0;
};
/// Greedy cover of the difference set by translates of Λ_i; the covering
/// translate for an uncovered δ is the nearest-to-zero candidate δ - λ, ties
/// broken by lexicographic point order.
std::vector<MeyerWitness> meyer_witness(const MultiSetPatch& p, const Box& margin,
                                        const CutProjectScheme* scheme = nullptr,
                                        const std::vector<Window>* windows = nullptr);

struct DensityEstimate {
    std::vector<double> per_j;
    double limit = 0;  // last partial
};
std::vector<DensityEstimate> density_estimate(const MultiSetPatch& p,
                                              const AveragingSequence& seq);

/// JSON report for the `analyze` subcommand.
nlohmann::ordered_json analyze_report(const SchemeConfig& cfg, const MultiSetPatch& patch,
                                      const AveragingSequence& seq,
                                      const std::vector<double>& k_radii);

}  // namespace modelset
