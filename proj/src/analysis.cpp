#include "modelset/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_set>

#include "modelset/errors.hpp"

namespace modelset {

using ordered_json = nlohmann::ordered_json;

AveragingSequence::AveragingSequence(int dim, std::vector<double> radii)
    : dim_(dim), radii_(std::move(radii)) {
    if (radii_.empty()) throw PreconditionError("averaging sequence needs at least one radius");
    for (size_t i = 0; i + 1 < radii_.size(); ++i)
        if (!(radii_[i] < radii_[i + 1]))
            throw PreconditionError("averaging radii must be strictly increasing");
    if (radii_.front() <= 0) throw PreconditionError("averaging radii must be positive");
}

AveragingSequence AveragingSequence::doubling(int dim, double first, int count) {
    std::vector<double> radii;
    double r = first;
    for (int i = 0; i < count; ++i, r *= 2) radii.push_back(r);
    return AveragingSequence(dim, std::move(radii));
}

AveragingSequence AveragingSequence::geometric_to(int dim, double r_last, int count) {
    std::vector<double> radii(count);
    double r = r_last;
    for (int i = count - 1; i >= 0; --i, r /= 2) radii[i] = r;
    return AveragingSequence(dim, std::move(radii));
}

double vanhove_ratio(const AveragingSequence& seq, const Box& k_box, int j) {
    if (k_box.dim() != seq.dim()) throw PreconditionError("K-box dimension mismatch");
    Box a = seq.box(j);
    // piece 1: (K + A) \ A°
    std::vector<Interval> sum_axes;
    for (int i = 0; i < a.dim(); ++i) {
        const auto& ax = a.axis(i);
        const auto& kx = k_box.axis(i);
        sum_axes.push_back(Interval{ax.lo + kx.lo, ax.hi + kx.hi, true, true});
    }
    Box sum(std::move(sum_axes));
    QuadraticNumber piece1 = sum.volume() - sum.intersect(a).volume();
    // piece 2: A \ interior(A ⊖ K), where A ⊖ K = { x : x + K ⊆ A }
    std::vector<Interval> ero_axes;
    for (int i = 0; i < a.dim(); ++i) {
        const auto& ax = a.axis(i);
        const auto& kx = k_box.axis(i);
        ero_axes.push_back(Interval{ax.lo - kx.lo, ax.hi - kx.hi, true, true});
    }
    Box erosion(std::move(ero_axes));
    QuadraticNumber piece2 = a.volume() - a.intersect(erosion).volume();
    return (piece1 + piece2).to_double() / a.volume().to_double();
}

std::vector<DeloneRadii> delone_radii(const MultiSetPatch& p) {
    std::vector<DeloneRadii> out;
    int n = p.physical_dim();
    for (int c = 0; c < p.colour_count(); ++c) {
        const auto& pts = p.colour(c);
        if (pts.empty()) throw PreconditionError("delone radii of an empty colour");
        DeloneRadii rr;
        double region_radius = 0;
        for (const auto& ax : p.region().axes())
            region_radius = std::max(region_radius, ax.length().to_double() / 2);
        if (pts.size() < 2) {
            rr.degenerate = true;
            rr.covering = region_radius;
            out.push_back(rr);
            continue;
        }
        if (n == 1) {
            QuadraticNumber min_gap = pts[1].pos[0] - pts[0].pos[0];
            QuadraticNumber max_gap = min_gap;
            for (size_t i = 1; i + 1 < pts.size(); ++i) {
                QuadraticNumber g = pts[i + 1].pos[0] - pts[i].pos[0];
                if (g < min_gap) min_gap = g;
                if (g > max_gap) max_gap = g;
            }
            rr.packing = min_gap.to_double() / 2;
            rr.covering = max_gap.to_double() / 2;
        } else {
            // sorted by x; sweep for the closest pair
            double best = std::numeric_limits<double>::infinity();
            std::vector<Vec2> v;
            v.reserve(pts.size());
            for (const auto& q : pts) v.push_back({q.pos[0].to_double(), q.pos[1].to_double()});
            for (size_t i = 0; i < v.size(); ++i)
                for (size_t j2 = i + 1; j2 < v.size() && v[j2].x - v[i].x < best; ++j2)
                    best = std::min(best, std::hypot(v[i].x - v[j2].x, v[i].y - v[j2].y));
            rr.packing = best / 2;
            // covering radius estimated on a grid over the shrunken region
            auto lo = p.region().lo_double(), hi = p.region().hi_double();
            double worst = 0;
            const int grid = 48;
            for (int gx = 0; gx <= grid; ++gx)
                for (int gy = 0; gy <= grid; ++gy) {
                    Vec2 g{lo[0] + (hi[0] - lo[0]) * gx / grid,
                           lo[1] + (hi[1] - lo[1]) * gy / grid};
                    double nearest = std::numeric_limits<double>::infinity();
                    for (const auto& q : v)
                        nearest = std::min(nearest, std::hypot(q.x - g.x, q.y - g.y));
                    worst = std::max(worst, nearest);
                }
            rr.covering = worst;
        }
        out.push_back(rr);
    }
    return out;
}

std::vector<FlcClass> flc_catalog(const MultiSetPatch& p, const Box& k_box) {
    if (k_box.dim() != p.physical_dim()) throw PreconditionError("K-box dimension mismatch");
    std::map<Cluster, int> classes;
    int n = p.physical_dim();
    for (int c = 0; c < p.colour_count(); ++c) {
        for (const auto& anchor : p.colour(c)) {
            std::vector<QuadraticNumber> shift(n);
            for (int i = 0; i < n; ++i) shift[i] = anchor.pos[i];
            if (!p.region().contains_box(k_box.translate(shift))) continue;  // stay faithful
            classes[cluster_at(p, anchor, k_box)] += 1;
        }
    }
    std::vector<FlcClass> out;
    out.reserve(classes.size());
    for (auto& [cl, mult] : classes) out.push_back(FlcClass{cl, mult});
    return out;
}

RepetitivityReport repetitivity_gap(const MultiSetPatch& p, const Box& k_box) {
    int n = p.physical_dim();
    RepetitivityReport rep;
    // anchor: origin-nearest support point
    const PatchPoint* anchor = nullptr;
    int anchor_colour = -1;
    double anchor_dist = std::numeric_limits<double>::infinity();
    for (int c = 0; c < p.colour_count(); ++c)
        for (const auto& q : p.colour(c)) {
            double d2 = 0;
            for (int i = 0; i < n; ++i) d2 += q.pos[i].to_double() * q.pos[i].to_double();
            if (d2 < anchor_dist) {
                anchor_dist = d2;
                anchor = &q;
                anchor_colour = c;
            }
        }
    if (!anchor) throw PreconditionError("repetitivity gap of an empty patch");

    std::vector<QuadraticNumber> apos(n);
    for (int i = 0; i < n; ++i) apos[i] = anchor->pos[i];
    Box b = k_box.translate(apos);
    if (!p.region().contains_box(b))
        throw PreconditionError("anchor cluster box leaves the faithful region");

    // the cluster to match, recentred at the anchor
    Cluster target = cluster_at(p, *anchor, k_box);
    size_t target_size = 0;
    for (const auto& col : target.offsets) target_size += col.size();

    std::vector<std::vector<QuadraticNumber>> valid;
    for (const auto& y : p.colour(anchor_colour)) {
        std::vector<QuadraticNumber> t(n);
        for (int i = 0; i < n; ++i) t[i] = anchor->pos[i] - y.pos[i];
        // need faithfulness of t + p on B, i.e. B - t inside the region
        std::vector<QuadraticNumber> neg(n);
        for (int i = 0; i < n; ++i) neg[i] = -t[i];
        if (!p.region().contains_box(b.translate(neg))) continue;
        ++rep.checked;
        // (t + p) ∩ B = p ∩ B  <=>  the recentred cluster at y equals the
        // anchor's cluster and carries the same number of points
        Cluster probe = cluster_at(p, y, k_box);
        size_t probe_size = 0;
        for (const auto& col : probe.offsets) probe_size += col.size();
        if (probe_size == target_size && probe == target) valid.push_back(std::move(t));
    }
    if (n == 1) {
        std::vector<double> ts;
        for (const auto& t : valid) ts.push_back(t[0].to_double());
        std::sort(ts.begin(), ts.end());
        rep.returns = ts;
        for (size_t i = 0; i + 1 < ts.size(); ++i)
            rep.max_gap = std::max(rep.max_gap, ts[i + 1] - ts[i]);
    } else {
        // report the largest nearest-neighbour spacing of the return set
        std::vector<Vec2> ts;
        for (const auto& t : valid) ts.push_back({t[0].to_double(), t[1].to_double()});
        for (const auto& a : ts) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& o : ts) {
                double dd = std::hypot(a.x - o.x, a.y - o.y);
                if (dd > 0) nearest = std::min(nearest, dd);
            }
            if (nearest < std::numeric_limits<double>::infinity())
                rep.max_gap = std::max(rep.max_gap, nearest);
            rep.returns.push_back(a.x);
        }
    }
    return rep;
}

namespace {

struct CoeffHash {
    size_t operator()(const std::array<int64_t, 4>& c) const {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (int64_t v : c) {
            h ^= static_cast<uint64_t>(v);
            h *= 0x100000001b3ULL;
        }
        return static_cast<size_t>(h);
    }
};

}  // namespace

std::vector<PatchPoint> patch_difference_set(const MultiSetPatch& p, int colour, const Box& core,
                                             const CutProjectScheme* scheme,
                                             const Window* difference_window) {
    int n = p.physical_dim();
    const auto& pts = p.colour(colour);
    std::vector<PatchPoint> deltas;

    bool coeff_backed = scheme && difference_window && !pts.empty() && pts.front().has_coeffs();
    if (coeff_backed) {
        std::unordered_set<std::array<int64_t, 4>, CoeffHash> present;
        for (const auto& q : pts) present.insert(q.coeffs);
        CutProjectScheme::EnumerationQuery query;
        query.physical = core;
        query.window = difference_window;
        query.policy = BoundaryPolicy::Closure;
        scheme->for_each_lattice_point(query, [&](const std::array<int64_t, 4>& c) {
            // candidate δ is a patch difference iff some x and x - δ are both present
            for (const auto& x : pts) {
                std::array<int64_t, 4> y = x.coeffs;
                for (int i = 0; i < 4; ++i) y[i] -= c[i];
                if (present.count(y)) {
                    PatchPoint d;
                    d.coeffs = c;
                    auto phys = scheme->physical_of(std::span<const int64_t>(c.data(), scheme->rank()));
                    for (int i = 0; i < n; ++i) d.pos[i] = phys[i];
                    deltas.push_back(std::move(d));
                    return;
                }
            }
        });
    } else {
        std::vector<PatchPoint> raw;
        for (const auto& x : pts)
            for (const auto& y : pts) {
                PatchPoint d;
                std::vector<QuadraticNumber> coords(n);
                for (int i = 0; i < n; ++i) {
                    d.pos[i] = x.pos[i] - y.pos[i];
                    coords[i] = d.pos[i];
                }
                if (!core.contains(coords)) continue;
                if (x.has_coeffs() && y.has_coeffs()) {
                    d.coeffs = x.coeffs;
                    for (int i = 0; i < 4; ++i) d.coeffs[i] -= y.coeffs[i];
                }
                raw.push_back(std::move(d));
            }
        std::sort(raw.begin(), raw.end(), [n](const PatchPoint& a, const PatchPoint& b) {
            return compare_points(a, b, n) < 0;
        });
        for (auto& d : raw)
            if (deltas.empty() || compare_points(deltas.back(), d, n) != 0)
                deltas.push_back(std::move(d));
        return deltas;
    }

    std::sort(deltas.begin(), deltas.end(), [n](const PatchPoint& a, const PatchPoint& b) {
        return compare_points(a, b, n) < 0;
    });
    return deltas;
}

std::vector<MeyerWitness> meyer_witness(const MultiSetPatch& p, const Box& margin,
                                        const CutProjectScheme* scheme,
                                        const std::vector<Window>* windows) {
    int n = p.physical_dim();
    // core = region shrunk by the margin box
    std::vector<Interval> core_axes;
    for (int i = 0; i < n; ++i) {
        const auto& r = p.region().axis(i);
        const auto& m = margin.axis(i);
        core_axes.push_back(Interval{r.lo - m.lo, r.hi - m.hi, true, true});
    }
    Box core(std::move(core_axes));

    std::vector<MeyerWitness> out;
    for (int c = 0; c < p.colour_count(); ++c) {
        const auto& pts = p.colour(c);
        if (pts.empty()) throw PreconditionError("meyer witness of an empty colour");
        Window diff_window;
        const Window* diff_ptr = nullptr;
        if (scheme && windows) {
            diff_window = windows->at(c).difference();
            diff_ptr = &diff_window;
        }
        auto deltas = patch_difference_set(p, c, core, scheme, diff_ptr);
        // process differences nearest zero first: the prefix (and so the
        // greedy's choices) is then independent of the region size, which is
        // what lets |J| stabilize as the region grows
        std::sort(deltas.begin(), deltas.end(), [n](const PatchPoint& a, const PatchPoint& b) {
            double ra = 0, rb = 0;
            for (int i = 0; i < n; ++i) {
                ra = std::max(ra, std::abs(a.pos[i].to_double()));
                rb = std::max(rb, std::abs(b.pos[i].to_double()));
            }
            if (ra != rb) return ra < rb;
            return compare_points(a, b, n) < 0;
        });

        MeyerWitness w;
        w.delta_count = deltas.size();

        std::unordered_set<std::array<int64_t, 4>, CoeffHash> present;
        bool use_coeffs = !pts.empty() && pts.front().has_coeffs() && !deltas.empty() &&
                          deltas.front().has_coeffs();
        if (use_coeffs)
            for (const auto& q : pts) present.insert(q.coeffs);

        auto in_patch = [&](const PatchPoint& q) {
            if (use_coeffs) return present.count(q.coeffs) > 0;
            return p.point_in(c, q);
        };

        std::vector<bool> covered(deltas.size(), false);
        for (size_t i = 0; i < deltas.size(); ++i) {
            if (covered[i]) continue;
            // nearest-to-zero covering translate j = δ - λ, λ in the patch
            const PatchPoint* best_lambda = nullptr;
            double best_norm = std::numeric_limits<double>::infinity();
            PatchPoint best_j;
            for (const auto& lam : pts) {
                PatchPoint j;
                double norm = 0;
                for (int a = 0; a < n; ++a) {
                    j.pos[a] = deltas[i].pos[a] - lam.pos[a];
                    norm = std::max(norm, std::abs(j.pos[a].to_double()));
                }
                bool better = norm < best_norm - 1e-12;
                if (!better && norm < best_norm + 1e-12 && best_lambda)
                    better = compare_points(j, best_j, n) < 0;  // deterministic tie-break
                if (better) {
                    best_norm = norm;
                    best_lambda = &lam;
                    best_j = j;
                    if (use_coeffs && deltas[i].has_coeffs() && lam.has_coeffs()) {
                        best_j.coeffs = deltas[i].coeffs;
                        for (int a = 0; a < 4; ++a) best_j.coeffs[a] -= lam.coeffs[a];
                    } else {
                        best_j.coeffs = {kNoCoeff, kNoCoeff, kNoCoeff, kNoCoeff};
                    }
                }
            }
            w.j_set.push_back(best_j);
            for (size_t r = i; r < deltas.size(); ++r) {
                if (covered[r]) continue;
                PatchPoint q;
                for (int a = 0; a < n; ++a) q.pos[a] = deltas[r].pos[a] - best_j.pos[a];
                if (use_coeffs) {
                    q.coeffs = deltas[r].coeffs;
                    for (int a = 0; a < 4; ++a) q.coeffs[a] -= best_j.coeffs[a];
                }
                if (in_patch(q)) covered[r] = true;
            }
        }
        std::sort(w.j_set.begin(), w.j_set.end(), [n](const PatchPoint& a, const PatchPoint& b) {
            return compare_points(a, b, n) < 0;
        });
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<DensityEstimate> density_estimate(const MultiSetPatch& p,
                                              const AveragingSequence& seq) {
    if (seq.dim() != p.physical_dim()) throw PreconditionError("sequence dimension mismatch");
    if (!p.faithful_on(seq.box(seq.size() - 1)))
        throw PreconditionError("patch region must contain the largest averaging box");
    std::vector<DensityEstimate> out;
    for (int c = 0; c < p.colour_count(); ++c) {
        DensityEstimate est;
        for (int j = 0; j < seq.size(); ++j) {
            Box a = seq.box(j);
            size_t count = 0;
            for (const auto& q : p.colour(c)) {
                std::vector<QuadraticNumber> coords(q.pos.begin(),
                                                    q.pos.begin() + p.physical_dim());
                if (a.contains(coords)) ++count;
            }
            est.per_j.push_back(static_cast<double>(count) / a.volume().to_double());
        }
        est.limit = est.per_j.back();
        out.push_back(std::move(est));
    }
    return out;
}

ordered_json analyze_report(const SchemeConfig& cfg, const MultiSetPatch& patch,
                            const AveragingSequence& seq, const std::vector<double>& k_radii) {
    ordered_json rep;
    auto delone = delone_radii(patch);
    ordered_json dj = ordered_json::array();
    for (const auto& d : delone)
        dj.push_back(ordered_json{{"r", d.packing}, {"R", d.covering}, {"degenerate", d.degenerate}});
    rep["delone"] = dj;

    ordered_json flc = ordered_json::array();
    ordered_json repet = ordered_json::array();
    for (double kr : k_radii) {
        Box kb = Box::cube(patch.physical_dim(), kr);
        flc.push_back(ordered_json{{"k_radius", kr},
                                   {"class_count", flc_catalog(patch, kb).size()}});
        auto rg = repetitivity_gap(patch, kb);
        repet.push_back(ordered_json{{"k_radius", kr},
                                     {"return_count", rg.returns.size()},
                                     {"max_gap", rg.max_gap}});
    }
    rep["flc"] = flc;
    rep["repetitivity"] = repet;

    Box margin = Box::cube(patch.physical_dim(), k_radii.empty() ? 1.0 : k_radii.back());
    auto meyer = meyer_witness(patch, margin, &cfg.scheme, &cfg.windows);
    ordered_json mj = ordered_json::array();
    for (const auto& m : meyer) {
        ordered_json j_points = ordered_json::array();
        for (const auto& q : m.j_set) {
            ordered_json pt = ordered_json::array();
            for (int i = 0; i < patch.physical_dim(); ++i) pt.push_back(q.pos[i].to_double());
            j_points.push_back(pt);
        }
        mj.push_back(ordered_json{{"J", j_points},
                                  {"size", m.j_set.size()},
                                  {"delta_count", m.delta_count}});
    }
    rep["meyer"] = mj;

    auto dens = density_estimate(patch, seq);
    ordered_json densj = ordered_json::array();
    for (const auto& d : dens)
        densj.push_back(ordered_json{{"per_j", d.per_j}, {"limit", d.limit}});
    rep["density"] = densj;
    return rep;
}

}  // namespace modelset
