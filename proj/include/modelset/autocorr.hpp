#pragma once

#include <optional>

#include "modelset/analysis.hpp"
#include "modelset/patch.hpp"
#include "modelset/scheme.hpp"

namespace modelset {

/// Density of a symmetric difference along the averaging sequence. The
/// lim-sup is reported as the full partial sequence plus the last value;
/// `converged` means the last two partials differ by < 0.5%.
struct AutocorrDistance {
    double value = 0;
    std::vector<double> partials;
    bool converged = false;
};

/// d(p1, p2): per A_j, sum over colours of #((Λ_i Δ Λ'_i) ∩ A_j) / theta(A_j).
AutocorrDistance d_empirical(const MultiSetPatch& p1, const MultiSetPatch& p2,
                             const AveragingSequence& seq);

/// The pseudo-metric induced on internal space by the covariogram formula:
/// d^H(s) = sum_i [theta(W_i \ (s+W_i)) + theta(W_i \ (-s+W_i))] / covolume.
QuadraticNumber internal_distance_exact(const CutProjectScheme& scheme,
                                        const std::vector<Window>& windows,
                                        const InternalPoint& s);
double internal_distance(const CutProjectScheme& scheme, const std::vector<Window>& windows,
                         const InternalPoint& s);

/// d(t + Λ, Λ) for a lattice vector t, via the covariogram formula for
/// regular model sets. Exact in 1D.
QuadraticNumber d_analytic_exact(const CutProjectScheme& scheme,
                                 const std::vector<Window>& windows,
                                 std::span<const int64_t> t_coeffs);
double d_analytic(const CutProjectScheme& scheme, const std::vector<Window>& windows,
                  std::span<const int64_t> t_coeffs);

/// sup over t of d(t+Λ, Λ) = 2 * sum_i theta_H(W_i), normalized.
QuadraticNumber d_sup_exact(const CutProjectScheme& scheme, const std::vector<Window>& windows);
double d_sup(const CutProjectScheme& scheme, const std::vector<Window>& windows);

/// For k = 1 single-interval windows the sub-level set {d^H < eps} is the
/// euclidean ball |s| < rho(eps); returns the exact modulus rho(eps).
std::optional<QuadraticNumber> ball_radius_exact(const CutProjectScheme& scheme,
                                                 const std::vector<Window>& windows, double eps);

struct PEpsilonResult {
    bool all_of_g = false;           // eps > 2 d(Λ, ∅): every lattice point qualifies
    std::vector<PatchPoint> points;  // P_eps ∩ region, sorted by physical position
    double max_gap = 0;              // 1D: max consecutive spacing
    std::optional<double> ball_radius;  // euclidean modulus when available
    bool identity_checked = false;   // dual-route star-image comparison ran
    bool identity_holds = false;     // phi(P_eps) = phi(L ∩ region) ∩ B_eps^H exactly
};
/// P_eps = { t in L ∩ region : d(t+Λ, Λ) < eps }, decided exactly in 1D.
PEpsilonResult p_epsilon(const CutProjectScheme& scheme, const std::vector<Window>& windows,
                         double eps, const Box& region);

struct ProbeEntry {
    std::array<int64_t, 4> t{0, 0, 0, 0};
    double phi_norm = 0;
    double d_value = 0;
};
struct TopologyProbeReport {
    std::vector<ProbeEntry> entries;
    bool co_monotone = false;      // along the sequence, phi -> 0 iff d -> 0
    bool modulus_bound_holds = false;  // d >= 2 min_i (theta_i - cov_i)/covol on every entry
    std::optional<int> redundancy_witness_label;  // nonzero label with d^H = 0, if any
};
/// Probes the equivalence of the local and autocorrelation topologies along a
/// lattice sequence; with a redundant scheme it also exhibits the internal
/// cyclic shift with d^H = 0 that irredundancy removes.
TopologyProbeReport topology_probe(const CutProjectScheme& scheme,
                                   const std::vector<Window>& windows,
                                   const std::vector<std::array<int64_t, 4>>& t_sequence);

}  // namespace modelset
