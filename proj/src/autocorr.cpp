#include "modelset/autocorr.hpp"

#include <algorithm>
#include <cmath>

#include "modelset/errors.hpp"

namespace modelset {

AutocorrDistance d_empirical(const MultiSetPatch& p1, const MultiSetPatch& p2,
                             const AveragingSequence& seq) {
    if (p1.physical_dim() != p2.physical_dim() || p1.colour_count() != p2.colour_count())
        throw PreconditionError("patches are not comparable");
    Box largest = seq.box(seq.size() - 1);
    if (!p1.faithful_on(largest) || !p2.faithful_on(largest))
        throw PreconditionError("patches must be faithful on the largest averaging box");
    int n = p1.physical_dim();

    // symmetric difference, computed once per colour by exact merge
    std::vector<PatchPoint> sym;
    for (int c = 0; c < p1.colour_count(); ++c) {
        const auto& a = p1.colour(c);
        const auto& b = p2.colour(c);
        size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (i == a.size()) {
                sym.push_back(b[j++]);
            } else if (j == b.size()) {
                sym.push_back(a[i++]);
            } else {
                int cmp = compare_points(a[i], b[j], n);
                if (cmp < 0)
                    sym.push_back(a[i++]);
                else if (cmp > 0)
                    sym.push_back(b[j++]);
                else {
                    ++i;
                    ++j;
                }
            }
        }
    }

    AutocorrDistance out;
    for (int j = 0; j < seq.size(); ++j) {
        Box box = seq.box(j);
        size_t count = 0;
        for (const auto& q : sym) {
            std::vector<QuadraticNumber> coords(q.pos.begin(), q.pos.begin() + n);
            if (box.contains(coords)) ++count;
        }
        out.partials.push_back(static_cast<double>(count) / box.volume().to_double());
    }
    out.value = out.partials.back();
    if (out.partials.size() >= 2) {
        double a = out.partials[out.partials.size() - 2], b = out.partials.back();
        double scale = std::max({std::abs(a), std::abs(b), 1e-300});
        out.converged = std::abs(a - b) / scale < 0.005 || (a == 0 && b == 0);
    }
    return out;
}

QuadraticNumber internal_distance_exact(const CutProjectScheme& scheme,
                                        const std::vector<Window>& windows,
                                        const InternalPoint& s) {
    QuadraticNumber total(0);
    InternalPoint neg = s.negate(scheme.cyclic_order());
    for (const auto& w : windows) {
        QuadraticNumber theta = w.measure_exact();
        total += (theta - w.covariogram_exact(s)) + (theta - w.covariogram_exact(neg));
    }
    return total / scheme.covolume_exact();
}

double internal_distance(const CutProjectScheme& scheme, const std::vector<Window>& windows,
                         const InternalPoint& s) {
    if (scheme.internal_dim() == 1) return internal_distance_exact(scheme, windows, s).to_double();
    double total = 0;
    InternalPoint neg = s.negate(scheme.cyclic_order());
    for (const auto& w : windows) {
        double theta = w.measure_double();
        total += (theta - w.covariogram_double(s)) + (theta - w.covariogram_double(neg));
    }
    return total / scheme.covolume();
}

QuadraticNumber d_analytic_exact(const CutProjectScheme& scheme,
                                 const std::vector<Window>& windows,
                                 std::span<const int64_t> t_coeffs) {
    return internal_distance_exact(scheme, windows, scheme.star_map(t_coeffs));
}

double d_analytic(const CutProjectScheme& scheme, const std::vector<Window>& windows,
                  std::span<const int64_t> t_coeffs) {
    return internal_distance(scheme, windows, scheme.star_map(t_coeffs));
}

QuadraticNumber d_sup_exact(const CutProjectScheme& scheme, const std::vector<Window>& windows) {
    QuadraticNumber total(0);
    for (const auto& w : windows) total += w.measure_exact();
    return QuadraticNumber(2) * total / scheme.covolume_exact();
}

double d_sup(const CutProjectScheme& scheme, const std::vector<Window>& windows) {
    if (scheme.internal_dim() == 1) return d_sup_exact(scheme, windows).to_double();
    double total = 0;
    for (const auto& w : windows) total += w.measure_double();
    return 2 * total / scheme.covolume();
}

std::optional<QuadraticNumber> ball_radius_exact(const CutProjectScheme& scheme,
                                                 const std::vector<Window>& windows, double eps) {
    if (scheme.internal_dim() != 1 || scheme.cyclic_order() != 1) return std::nullopt;
    for (const auto& w : windows)
        if (!w.single_interval_per_label()) return std::nullopt;
    // With cov_i(u) = (w_i - u)+ the condition d^H(|s|) = eps reads
    // g(u) := sum_i min(u, w_i) = eps * covol / 2, and g is strictly increasing
    // until every window has slid off. Walk the breakpoints and solve exactly.
    std::vector<QuadraticNumber> widths;
    for (const auto& w : windows) widths.push_back(w.measure_exact());
    std::sort(widths.begin(), widths.end());
    QuadraticNumber target = QuadraticNumber(Rational(eps)) * scheme.covolume_exact() /
                             QuadraticNumber(2);
    QuadraticNumber saturated(0);  // sum of widths already slid off
    long long active = static_cast<long long>(widths.size());
    for (const auto& w : widths) {
        QuadraticNumber g_at_break = saturated + QuadraticNumber(Rational(active)) * w;
        if (target <= g_at_break)
            return (target - saturated) / QuadraticNumber(Rational(active));
        saturated += w;
        --active;
    }
    return std::nullopt;  // eps at or above the sup: no finite ball
}

PEpsilonResult p_epsilon(const CutProjectScheme& scheme, const std::vector<Window>& windows,
                         double eps, const Box& region) {
    if (eps <= 0) throw PreconditionError("epsilon must be positive");
    for (const auto& w : windows)
        if (!w.is_regular())
            throw PreconditionError("p_epsilon needs regular windows");
    PEpsilonResult res;
    QuadraticNumber eps_q{Rational(eps)};
    bool exact_sup = scheme.internal_dim() == 1;
    res.all_of_g = exact_sup ? eps_q > d_sup_exact(scheme, windows) : eps > d_sup(scheme, windows);

    // candidate superset: star image inside the union of difference windows
    int k = scheme.cyclic_order();
    Window diff_union;
    {
        std::vector<IntervalSet> sets1(k);
        std::vector<ConvexPolygon> polys(k);
        bool poly = scheme.internal_dim() == 2;
        for (const auto& w : windows) {
            Window d = w.difference();
            for (int lab = 0; lab < k; ++lab) {
                if (!poly) {
                    std::vector<Interval> ivs = sets1[lab].parts();
                    for (const auto& iv : d.interval_part(lab).parts()) ivs.push_back(iv);
                    sets1[lab] = IntervalSet(std::move(ivs));
                } else {
                    if (d.polygon_part(lab).empty()) continue;
                    if (polys[lab].empty()) {
                        polys[lab] = d.polygon_part(lab);
                    } else {
                        std::vector<Vec2> vs = polys[lab].vertices();
                        for (Vec2 v : d.polygon_part(lab).vertices()) vs.push_back(v);
                        polys[lab] = ConvexPolygon::hull_of(std::move(vs));
                    }
                }
            }
        }
        diff_union = poly ? Window::polygons(k, std::move(polys))
                          : Window::intervals(k, std::move(sets1));
    }

    bool exact_1d = scheme.internal_dim() == 1;
    CutProjectScheme::EnumerationQuery q;
    q.physical = region;
    q.window = &diff_union;
    q.policy = BoundaryPolicy::Closure;
    scheme.for_each_lattice_point(q, [&](const std::array<int64_t, 4>& c) {
        bool in;
        if (exact_1d) {
            in = internal_distance_exact(scheme, windows,
                                         scheme.star_map(std::span<const int64_t>(
                                             c.data(), scheme.rank()))) < eps_q;
        } else {
            in = internal_distance(scheme, windows,
                                   scheme.star_map(std::span<const int64_t>(c.data(),
                                                                            scheme.rank()))) <
                 eps;
        }
        if (!in) return;
        PatchPoint p;
        p.coeffs = c;
        auto phys = scheme.physical_of(std::span<const int64_t>(c.data(), scheme.rank()));
        for (int i = 0; i < scheme.physical_dim(); ++i) p.pos[i] = phys[i];
        res.points.push_back(std::move(p));
    });
    int n = scheme.physical_dim();
    std::sort(res.points.begin(), res.points.end(),
              [n](const PatchPoint& a, const PatchPoint& b) {
                  return compare_points(a, b, n) < 0;
              });
    if (n == 1) {
        for (size_t i = 0; i + 1 < res.points.size(); ++i)
            res.max_gap = std::max(
                res.max_gap, (res.points[i + 1].pos[0] - res.points[i].pos[0]).to_double());
    }

    // dual-route star-image identity: compare the d-filtered set against the
    // euclidean-ball filter |phi(t)| < rho(eps), available for one-interval
    // windows where the sub-level sets of d^H are balls
    auto rho = ball_radius_exact(scheme, windows, eps);
    if (rho) {
        res.ball_radius = rho->to_double();
        std::vector<std::array<int64_t, 4>> route_b;
        Window ball = Window::intervals(
            1, {IntervalSet(Interval{-*rho, *rho, false, false})});
        CutProjectScheme::EnumerationQuery qb;
        qb.physical = region;
        qb.window = &ball;
        qb.policy = BoundaryPolicy::Flags;
        scheme.for_each_lattice_point(
            qb, [&](const std::array<int64_t, 4>& c) { route_b.push_back(c); });
        std::sort(route_b.begin(), route_b.end());
        std::vector<std::array<int64_t, 4>> route_a;
        for (const auto& p : res.points) route_a.push_back(p.coeffs);
        std::sort(route_a.begin(), route_a.end());
        res.identity_checked = true;
        res.identity_holds = route_a == route_b;
    }
    return res;
}

TopologyProbeReport topology_probe(const CutProjectScheme& scheme,
                                   const std::vector<Window>& windows,
                                   const std::vector<std::array<int64_t, 4>>& t_sequence) {
    TopologyProbeReport rep;
    bool exact_1d = scheme.internal_dim() == 1;
    QuadraticNumber covol = scheme.covolume_exact();
    rep.modulus_bound_holds = true;
    for (const auto& t : t_sequence) {
        ProbeEntry e;
        e.t = t;
        InternalPoint phi = scheme.star_map(std::span<const int64_t>(t.data(), scheme.rank()));
        double norm2 = 0;
        for (const auto& r : phi.real) norm2 += r.to_double() * r.to_double();
        e.phi_norm = std::sqrt(norm2);
        e.d_value = internal_distance(scheme, windows, phi);
        // explicit modulus: d >= 2 min_i (theta_i - cov_i(phi)) / covol
        if (exact_1d) {
            QuadraticNumber d_exact = internal_distance_exact(scheme, windows, phi);
            bool first = true;
            QuadraticNumber min_term(0);
            for (const auto& w : windows) {
                QuadraticNumber term = w.measure_exact() - w.covariogram_exact(phi);
                if (first || term < min_term) {
                    min_term = term;
                    first = false;
                }
            }
            if (d_exact < QuadraticNumber(2) * min_term / covol) rep.modulus_bound_holds = false;
        }
        rep.entries.push_back(e);
    }
    // co-convergence on the provided sequence: smaller |phi| must mean smaller d
    // (checked pairwise with a tolerance for ties)
    rep.co_monotone = true;
    for (size_t i = 0; i < rep.entries.size(); ++i)
        for (size_t j = 0; j < rep.entries.size(); ++j)
            if (rep.entries[i].phi_norm < rep.entries[j].phi_norm - 1e-12 &&
                rep.entries[i].d_value > rep.entries[j].d_value + 1e-12)
                rep.co_monotone = false;

    // a redundant cyclic factor shows up as a nonzero label with d^H = 0
    if (scheme.cyclic_order() > 1) {
        auto stab = window_stabilizer(windows);
        for (int c : stab) {
            if (c == 0) continue;
            InternalPoint s;
            s.real.assign(scheme.internal_dim(), QuadraticNumber(0));
            s.label = c;
            bool zero = exact_1d ? internal_distance_exact(scheme, windows, s).is_zero()
                                 : internal_distance(scheme, windows, s) < 1e-12;
            if (zero) {
                rep.redundancy_witness_label = c;
                break;
            }
        }
    }
    return rep;
}

}  // namespace modelset
