#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modelset/box.hpp"
#include "modelset/linalg.hpp"
#include "modelset/patch.hpp"
#include "modelset/window.hpp"

namespace modelset {

/// One lattice generator: physical part in R^n, internal real part in R^d
/// (both with exact quadratic entries) and a cyclic label in Z/k.
struct Generator {
    std::vector<QuadraticNumber> physical;
    std::vector<QuadraticNumber> internal_real;
    int label = 0;
};

struct LatticeSite {
    std::array<int64_t, 4> coeffs{0, 0, 0, 0};
};

/// Cut-and-project scheme G <- G x H -> H with G = R^n, H = R^d x Z/k and
/// lattice L~ spanned by n+d generators with entries in Q(sqrt D).
/// Validates on construction: nonsingular real basis, injective physical
/// projection (exact rank check), dense internal projection (irrational-ratio
/// test per axis plus labels generating Z/k).
class CutProjectScheme {
public:
    CutProjectScheme(int field_d, int n, int d, int k, std::vector<Generator> basis);

    int field_d() const { return field_d_; }
    int physical_dim() const { return n_; }
    int internal_dim() const { return d_; }
    int cyclic_order() const { return k_; }
    int rank() const { return n_ + d_; }
    const std::vector<Generator>& basis() const { return basis_; }

    std::vector<QuadraticNumber> physical_of(std::span<const int64_t> coeffs) const;
    InternalPoint star_map(std::span<const int64_t> coeffs) const;
    int label_of(std::span<const int64_t> coeffs) const;

    /// k * |det(real basis)|: Haar measure of a fundamental domain of L~ in
    /// G x H with counting measure on the cyclic factor. The normalized
    /// theta_H divides raw Lebesgue-x-counting measure by this, which makes
    /// dens(Lambda(W)) = theta_H(W).
    const QuadraticNumber& covolume_exact() const { return covolume_; }
    double covolume() const { return covolume_.to_double(); }

    /// Exact coefficients alpha with B*alpha = z (z = physical ++ internal).
    std::vector<QuadraticNumber> solve_basis(const std::vector<QuadraticNumber>& z) const;
    const QMatrix& basis_matrix() const { return bmat_; }

    /// Recover integer coefficients from exact physical coordinates.
    /// nullopt when the point is not in L.
    std::optional<std::array<int64_t, 4>> coeffs_from_physical(
        const std::vector<QuadraticNumber>& phys) const;

    enum class InternalSolve { Unique, None, Underdetermined };
    /// Exact solutions of pi_2(x) = v over the lattice (real part and label).
    InternalSolve solve_internal(const InternalPoint& v, std::array<int64_t, 4>& out) const;

    struct EnumerationQuery {
        Box physical;                    // exact bounds with flags
        const Box* internal_box = nullptr;        // either a box...
        const Window* window = nullptr;           // ...or a window
        BoundaryPolicy policy = BoundaryPolicy::Flags;
    };
    /// Streams every lattice point satisfying the query, exactly once.
    /// Complete: the coefficient search box comes from the inverse basis
    /// matrix; borderline candidates are settled by exact arithmetic.
    void for_each_lattice_point(const EnumerationQuery& q,
                                const std::function<void(const std::array<int64_t, 4>&)>& fn) const;

    std::vector<LatticeSite> lattice_points_in_box(const Box& physical_box,
                                                   const Box& internal_box) const;

    /// Per colour i, Lambda(W_i as read by policy) ∩ region.
    MultiSetPatch enumerate_model_set(const std::vector<Window>& windows, const Box& region,
                                      BoundaryPolicy policy) const;

    nlohmann::ordered_json to_json() const;
    static CutProjectScheme from_json(const nlohmann::json& j);
    std::string hash() const;

private:
    int field_d_, n_, d_, k_;
    std::vector<Generator> basis_;
    QMatrix bmat_;      // (n+d) x (n+d), rows = coordinates, cols = generators
    QMatrix binv_;      // exact inverse
    QuadraticNumber covolume_;

    void validate();
};

std::string policy_name(BoundaryPolicy p);
BoundaryPolicy policy_from_name(const std::string& s);

nlohmann::ordered_json windows_to_json(const std::vector<Window>& windows);
std::vector<Window> windows_from_json(const nlohmann::json& j, int k, int d, int field_d);
std::string windows_hash(const std::vector<Window>& windows);

struct SchemeConfig {
    std::string name;
    CutProjectScheme scheme;
    std::vector<Window> windows;  // one per colour
};

SchemeConfig scheme_config_from_json(const nlohmann::json& j);
SchemeConfig load_scheme_config(const std::string& path);
nlohmann::ordered_json scheme_config_to_json(const SchemeConfig& cfg);

/// Quotient away the window stabilizer I: H' = H/I, labels and windows reduced
/// mod k' = k/|I|. Generated point sets are unchanged; the reduced windows have
/// trivial stabilizer.
std::pair<CutProjectScheme, std::vector<Window>> irredundant_reduction(
    const CutProjectScheme& scheme, const std::vector<Window>& windows);

}  // namespace modelset
