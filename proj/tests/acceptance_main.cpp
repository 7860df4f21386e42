// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each check pins its tolerance in code; criteria with runtime
// budgets enforce them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "modelset/analysis.hpp"
#include "modelset/autocorr.hpp"
#include "modelset/presets.hpp"
#include "modelset/torus.hpp"

using namespace modelset;

namespace {

QuadraticNumber q(long long v) { return QuadraticNumber(v); }

SchemeConfig nonsingular_fibonacci() {
    auto cfg = preset_fibonacci();
    QuadraticNumber lo(Rational(0), Rational(1, 3), 5);
    cfg.windows = {Window::intervals(1, {IntervalSet::half_open(lo, lo + q(1))})};
    cfg.name = "fibonacci-shift";
    return cfg;
}

MultiSetPatch make_patch(const SchemeConfig& cfg, double radius,
                         BoundaryPolicy policy = BoundaryPolicy::Flags) {
    return cfg.scheme.enumerate_model_set(cfg.windows, Box::cube(cfg.scheme.physical_dim(), radius),
                                          policy);
}

struct Outcome {
    bool pass;
    std::string detail;
};

// 1. density law: Fibonacci, W = [0,1), radius 1e4, within 1% of 1/sqrt5, < 5 s
Outcome criterion_density(double elapsed_limit, double& elapsed) {
    auto t0 = std::chrono::steady_clock::now();
    auto cfg = preset_fibonacci();
    const double radius = 1e4;
    auto patch = make_patch(cfg, radius);
    double density = static_cast<double>(patch.colour(0).size()) / (2 * radius);
    double expect = 1.0 / std::sqrt(5.0);
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << "density " << density << " vs " << expect << ", " << elapsed << "s";
    bool pass = std::abs(density - expect) / expect <= 0.01 && elapsed < elapsed_limit;
    return {pass, os.str()};
}

// 2. covariogram distance formula: 20 lattice t with |phi(t)| in (0,2),
//    |d_emp(r=1e4) - d_ana| <= 2% of d_sup, < 30 s total
Outcome criterion_covariogram(double elapsed_limit, double& elapsed) {
    auto t0 = std::chrono::steady_clock::now();
    auto cfg = preset_fibonacci();
    const double radius = 1e4;

    // pick 20 probe vectors: per 0.1-wide bin of (0, 2), the lattice point
    // with star image nearest the bin centre, searched in a compact region
    std::vector<std::array<int64_t, 4>> probes;
    {
        Box phys = Box::cube(1, 100.0);
        Box internal = Box::closed({0.02}, {1.98});
        auto sites = cfg.scheme.lattice_points_in_box(phys, internal);
        for (int bin = 0; bin < 20; ++bin) {
            double target = 0.1 * bin + 0.05;
            const LatticeSite* best = nullptr;
            double best_err = 1e300;
            for (const auto& s : sites) {
                double phi = cfg.scheme.star_map(std::span<const int64_t>(s.coeffs.data(), 2))
                                 .real[0]
                                 .to_double();
                double err = std::abs(phi - target);
                if (err < best_err) {
                    best_err = err;
                    best = &s;
                }
            }
            probes.push_back(best->coeffs);
        }
    }

    auto base = make_patch(cfg, radius + 102);
    auto restricted = base.translate_restrict({q(0)}, Box::cube(1, radius));
    AveragingSequence seq = AveragingSequence::geometric_to(1, radius, 5);
    double d_sup = d_sup_exact(cfg.scheme, cfg.windows).to_double();
    double worst = 0;
    bool pass = true;
    for (const auto& t : probes) {
        auto tphys = cfg.scheme.physical_of(std::span<const int64_t>(t.data(), 2));
        auto translated = base.translate_restrict(tphys, Box::cube(1, radius), &t);
        auto emp = d_empirical(restricted, translated, seq);
        double ana = d_analytic(cfg.scheme, cfg.windows, std::span<const int64_t>(t.data(), 2));
        double err = std::abs(emp.value - ana);
        worst = std::max(worst, err);
        if (err > 0.02 * d_sup) pass = false;
    }
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << "20 probes, worst |emp-ana| = " << worst << " (limit " << 0.02 * d_sup << "), "
       << elapsed << "s";
    return {pass && elapsed < elapsed_limit, os.str()};
}

// 3. star-image identity for eps in {0.05, 0.1, 0.2} on [-1e4, 1e4], exact;
//    max gap finite and non-increasing under region doubling
Outcome criterion_star_identity() {
    auto cfg = preset_fibonacci();
    bool pass = true;
    std::ostringstream os;
    for (double eps : {0.05, 0.1, 0.2}) {
        auto res = p_epsilon(cfg.scheme, cfg.windows, eps, Box::cube(1, 1e4));
        auto res2 = p_epsilon(cfg.scheme, cfg.windows, eps, Box::cube(1, 2e4));
        bool ok = res.identity_checked && res.identity_holds && res2.identity_checked &&
                  res2.identity_holds && !res.points.empty() && res.max_gap > 0 &&
                  res2.max_gap <= res.max_gap + 1e-9;
        os << "eps=" << eps << (ok ? " ok" : " FAIL") << " gap " << res.max_gap << "->"
           << res2.max_gap << "; ";
        pass = pass && ok;
    }
    return {pass, os.str()};
}

// 4. c_gamma: enclosure of diameter <= 1e-6 containing 0 for the generating
//    set; contains phi(t) exactly on a lattice translate
Outcome criterion_c_gamma() {
    auto cfg = preset_fibonacci();
    auto cert = c_gamma_streamed(cfg.scheme, cfg.windows, 1e-6, 3.0e7);
    bool contains_zero = cert.exact_lo->sign() <= 0 && cert.exact_hi->sign() >= 0;
    bool monotone = true;
    for (size_t i = 0; i + 1 < cert.stages.size(); ++i)
        if (cert.stages[i + 1].diameter >= cert.stages[i].diameter) monotone = false;

    auto patch = make_patch(cfg, 1500);
    std::array<int64_t, 4> t{2, -1, 0, 0};
    auto tphys = cfg.scheme.physical_of(std::span<const int64_t>(t.data(), 2));
    InternalPoint phi = cfg.scheme.star_map(std::span<const int64_t>(t.data(), 2));
    auto shifted = patch.translate_restrict(tphys, patch.region().translate(tphys), &t);
    auto cert2 = c_gamma(shifted, cfg.scheme, cfg.windows, 1e-9);
    bool contains_phi = *cert2.exact_lo <= phi.real[0] && phi.real[0] <= *cert2.exact_hi;

    std::ostringstream os;
    os << "diam " << cert.diameter << " (tol 1e-6), contains 0: " << contains_zero
       << ", stages monotone: " << monotone << ", translate contains phi(t): " << contains_phi;
    return {cert.reached_tol && cert.diameter <= 1e-6 && contains_zero && monotone &&
                contains_phi,
            os.str()};
}

// 5. equivariance: gamma(g + Lambda) = iota(g) + gamma(Lambda) exactly for 10
//    lattice vectors, plus the reduction identity iota(x) = (0, -phi(x)) + L~
Outcome criterion_equivariance() {
    auto cfg = preset_fibonacci();
    auto p = make_patch(cfg, 1200);
    auto base = gamma_map(p, cfg.scheme, cfg.windows, 1e-6);
    std::vector<std::array<int64_t, 4>> gs{{1, 0, 0, 0},  {0, 1, 0, 0},  {1, 1, 0, 0},
                                           {-2, 3, 0, 0}, {5, -3, 0, 0}, {0, -1, 0, 0},
                                           {4, 0, 0, 0},  {-1, -1, 0, 0}, {2, 2, 0, 0},
                                           {13, -8, 0, 0}};
    int good = 0;
    for (const auto& g : gs) {
        auto gphys = cfg.scheme.physical_of(std::span<const int64_t>(g.data(), 2));
        auto moved = p.translate_restrict(gphys, p.region().translate(gphys), &g);
        auto lhs = gamma_map(moved, cfg.scheme, cfg.windows, 1e-6);
        TorusPoint rhs = embed_iota(cfg.scheme, gphys).add(cfg.scheme, base.point);
        if (lhs.point == rhs) ++good;
    }
    int iota_good = 0;
    for (const auto& g : gs) {
        auto gphys = cfg.scheme.physical_of(std::span<const int64_t>(g.data(), 2));
        InternalPoint phi = cfg.scheme.star_map(std::span<const int64_t>(g.data(), 2));
        if (embed_iota(cfg.scheme, gphys) ==
            TorusPoint::reduce(cfg.scheme, {q(0), -phi.real[0]}, 0))
            ++iota_good;
    }
    std::ostringstream os;
    os << good << "/10 equivariant exactly, " << iota_good << "/10 iota identities exact";
    return {good == 10 && iota_good == 10, os.str()};
}

// 6. window reconstruction within Hausdorff 0.01 at radius 1e4, non-increasing
//    under doubling
Outcome criterion_reconstruction() {
    auto cfg = preset_fibonacci();
    auto rec1 = reconstruct_window(make_patch(cfg, 1e4), cfg.scheme, cfg.windows, 1e-9);
    auto rec2 = reconstruct_window(make_patch(cfg, 2e4), cfg.scheme, cfg.windows, 1e-9);
    std::ostringstream os;
    os << "hausdorff " << rec1[0].hausdorff_gap << " -> " << rec2[0].hausdorff_gap
       << " (limit 0.01)";
    return {rec1[0].hausdorff_gap <= 0.01 &&
                rec2[0].hausdorff_gap <= rec1[0].hausdorff_gap + 1e-12,
            os.str()};
}

// 7. singularity dichotomy at c = 0, decided exactly up to radius 1e4
Outcome criterion_singularity() {
    auto fib = preset_fibonacci();
    auto ns = nonsingular_fibonacci();
    Box region = Box::cube(1, 1e4);
    InternalPoint zero{{q(0)}, 0};
    auto s1 = singularity_test(zero, fib.scheme, fib.windows, region);
    auto s2 = singularity_test(zero, ns.scheme, ns.windows, region);
    bool witness_at_origin = s1.witness.has_value() &&
                             (s1.witness->pos[0].is_zero() || s1.witness->pos[0] == q(1));
    std::ostringstream os;
    os << "W=[0,1): singular=" << s1.singular << " (witness at origin: " << witness_at_origin
       << "); shifted window: singular=" << s2.singular << " exhaustive=" << s2.exhaustive;
    return {s1.singular && witness_at_origin && !s2.singular && s2.exhaustive, os.str()};
}

// 8. local rigidity: positive epsilon at A_M = [-10,10], non-increasing over
//    M in {10, 50, 100}
Outcome criterion_rigidity() {
    auto ns = nonsingular_fibonacci();
    auto p = make_patch(ns, 400);
    Box probe = Box::cube(1, 100.0);
    auto r10 = local_rigidity_radius(p, ns.scheme, ns.windows, 10.0, probe);
    auto r50 = local_rigidity_radius(p, ns.scheme, ns.windows, 50.0, probe);
    auto r100 = local_rigidity_radius(p, ns.scheme, ns.windows, 100.0, probe);
    std::ostringstream os;
    os << "eps(10)=" << r10.epsilon << " eps(50)=" << r50.epsilon << " eps(100)=" << r100.epsilon;
    return {r10.positive && r10.epsilon > 0 && r50.epsilon <= r10.epsilon &&
                r100.epsilon <= r50.epsilon && r100.positive,
            os.str()};
}

// 9. irredundancy: redundant k=2 preset reduces to k=1 with identical point
//    sets on [0, 100], and the reduced stabilizer is trivial
Outcome criterion_irredundancy() {
    auto cfg = preset_redundant_k2();
    auto [reduced, rwin] = irredundant_reduction(cfg.scheme, cfg.windows);
    Box region = Box::closed({0.0}, {100.0});
    auto before = cfg.scheme.enumerate_model_set(cfg.windows, region, BoundaryPolicy::Flags);
    auto after = reduced.enumerate_model_set(rwin, region, BoundaryPolicy::Flags);
    bool equal = before == after;
    auto stab = window_stabilizer(rwin);
    std::ostringstream os;
    os << "k " << cfg.scheme.cyclic_order() << " -> " << reduced.cyclic_order()
       << ", point sets equal: " << equal << ", reduced stabilizer size " << stab.size();
    return {reduced.cyclic_order() == 1 && equal && stab == std::vector<int>{0}, os.str()};
}

// 10. Meyer/FLC stabilization between radii 1e3 and 1e4; phi(Delta) inside
//     W - W exactly
Outcome criterion_meyer_flc() {
    auto cfg = preset_fibonacci();
    Box k_box = Box::cube(1, 2.8);
    Box margin = Box::cube(1, 10.0);

    auto p3 = make_patch(cfg, 1e3);
    auto p4 = make_patch(cfg, 1e4);
    size_t flc3 = flc_catalog(p3, k_box).size();
    size_t flc4 = flc_catalog(p4, k_box).size();
    auto m3 = meyer_witness(p3, margin, &cfg.scheme, &cfg.windows);
    auto m4 = meyer_witness(p4, margin, &cfg.scheme, &cfg.windows);

    Window diff = cfg.windows[0].difference();
    Box core = Box::cube(1, 1e4 - 10.0);
    auto deltas = patch_difference_set(p4, 0, core, &cfg.scheme, &diff);
    bool star_ok = deltas.size() == m4[0].delta_count;
    for (const auto& d : deltas) {
        InternalPoint ip = cfg.scheme.star_map(std::span<const int64_t>(d.coeffs.data(), 2));
        if (!diff.contains(ip, BoundaryPolicy::Flags)) {
            star_ok = false;
            break;
        }
    }
    std::ostringstream os;
    os << "|J| " << m3[0].j_set.size() << " vs " << m4[0].j_set.size() << ", FLC classes " << flc3
       << " vs " << flc4 << ", phi(Delta) in W-W: " << star_ok;
    return {m3[0].j_set.size() == m4[0].j_set.size() && flc3 == flc4 && star_ok, os.str()};
}

// 11. T_g sampling: 1000 uniform internal parameters, 0 singular hits at
//     radius 1e3, < 60 s
Outcome criterion_tg_sampling(double elapsed_limit, double& elapsed) {
    auto t0 = std::chrono::steady_clock::now();
    auto cfg = preset_fibonacci();
    Box region = Box::cube(1, 1e3);
    std::mt19937_64 rng(1357911);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int hits = 0;
    for (int i = 0; i < 1000; ++i) {
        InternalPoint c{{QuadraticNumber(Rational(uni(rng)))}, 0};
        if (singularity_test(c, cfg.scheme, cfg.windows, region).singular) ++hits;
    }
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << hits << "/1000 singular hits, " << elapsed << "s";
    return {hits == 0 && elapsed < elapsed_limit, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    struct Entry {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    double elapsed = 0;
    std::vector<Entry> entries{
        {1, "density law (dens = theta_H(W))",
         [&] { return criterion_density(5.0, elapsed); }},
        {2, "covariogram distance formula", [&] { return criterion_covariogram(30.0, elapsed); }},
        {3, "star-image identity phi(P_eps) = phi(L) ∩ B_eps", criterion_star_identity},
        {4, "c_gamma enclosure", criterion_c_gamma},
        {5, "gamma equivariance", criterion_equivariance},
        {6, "window reconstruction", criterion_reconstruction},
        {7, "singularity dichotomy", criterion_singularity},
        {8, "local rigidity", criterion_rigidity},
        {9, "irredundancy reduction", criterion_irredundancy},
        {10, "Meyer/FLC stabilization", criterion_meyer_flc},
        {11, "T_g sampling", [&] { return criterion_tg_sampling(60.0, elapsed); }},
    };

    int failures = 0;
    for (const auto& e : entries) {
        if (only != 0 && e.id != only) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = e.run();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %2d: %-42s [%s] (%.2fs)\n", out.pass ? "PASS" : "FAIL", e.id,
                    e.title, out.detail.c_str(), secs);
        if (!out.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
