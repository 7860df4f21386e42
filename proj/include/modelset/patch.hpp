#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modelset/box.hpp"

namespace modelset {

inline constexpr int64_t kNoCoeff = INT64_MIN;

/// One coloured point of a patch. Physical coordinates are exact; lattice
/// coefficients against the generating scheme's basis travel along when known
/// (all four slots set, unused slots zero; slot 0 == kNoCoeff marks absence).
struct PatchPoint {
    std::array<QuadraticNumber, 2> pos;  // physical coordinates, first n used
    std::array<int64_t, 4> coeffs{kNoCoeff, kNoCoeff, kNoCoeff, kNoCoeff};

    bool has_coeffs() const { return coeffs[0] != kNoCoeff; }
};

int compare_points(const PatchPoint& a, const PatchPoint& b, int n);

/// An m-colour point set restricted to a box region it is faithful on.
/// Immutable after construction; per-colour lists are strictly sorted.
class MultiSetPatch {
public:
    MultiSetPatch() = default;
    MultiSetPatch(int n, Box region, std::vector<std::vector<PatchPoint>> colours);

    int physical_dim() const { return n_; }
    int colour_count() const { return static_cast<int>(colours_.size()); }
    const Box& region() const { return region_; }
    const std::vector<PatchPoint>& colour(int i) const { return colours_.at(i); }
    size_t total_points() const;
    bool faithful_on(const Box& box) const { return region_.contains_box(box); }

    /// Lexicographically smallest point across colours; nullopt when empty.
    std::optional<PatchPoint> first_point() const;

    bool point_in(int colour, const PatchPoint& p) const;  // exact membership

    /// (t + this) restricted to new_region; requires new_region ⊆ t + region.
    /// When t is a lattice vector with known coefficients, pass them so point
    /// coefficients stay valid; otherwise they are dropped.
    MultiSetPatch translate_restrict(const std::vector<QuadraticNumber>& t, const Box& new_region,
                                     const std::array<int64_t, 4>* t_coeffs = nullptr) const;

    /// Exact per-colour set equality of this ∩ box vs other ∩ box.
    bool equal_on(const MultiSetPatch& other, const Box& box) const;

    bool operator==(const MultiSetPatch& other) const;

    // provenance, recorded by producers and serialized to the sidecar
    std::string scheme_hash, window_hash, policy;
    std::vector<QuadraticNumber> translation;  // accumulated t when built as t + Λ

private:
    int n_ = 1;
    Box region_;
    std::vector<std::vector<PatchPoint>> colours_;
};

/// A finite recentred cluster: per-colour exact offsets from the anchor.
struct Cluster {
    std::vector<std::vector<PatchPoint>> offsets;  // per colour, sorted
    bool operator==(const Cluster& other) const;
    bool operator<(const Cluster& other) const;  // lexicographic, for cataloguing
};

/// Extract the recentred cluster (anchor + K) ∩ patch.
Cluster cluster_at(const MultiSetPatch& p, const PatchPoint& anchor, const Box& k_box);

/// Membership test for the local-topology entourage U_{K,V}: finds s with
/// |s| <= v_radius and (s + p1) ∩ K = p2 ∩ K (exact per-colour equality).
/// Candidate shifts are point differences p2 - p1 inside K plus s = 0; equality
/// of discrete sets forces any matching s into that finite list.
std::optional<std::vector<QuadraticNumber>> local_match(const MultiSetPatch& p1,
                                                        const MultiSetPatch& p2, const Box& k_box,
                                                        double v_radius);

void save_patch_csv(const MultiSetPatch& p, const std::string& csv_path,
                    const std::string& sidecar_path);
MultiSetPatch load_patch_csv(const std::string& csv_path, const std::string& sidecar_path);

}  // namespace modelset
