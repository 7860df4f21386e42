#include "modelset/torus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "modelset/errors.hpp"

namespace modelset {

namespace {

int64_t to_int64_checked(const BigInt& v) {
    if (v > BigInt(INT64_MAX / 4) || v < BigInt(INT64_MIN / 4))
        throw PreconditionError("lattice coefficient out of range");
    return v.convert_to<int64_t>();
}

}  // namespace

TorusPoint TorusPoint::reduce(const CutProjectScheme& scheme, std::vector<QuadraticNumber> z,
                              int label) {
    if (static_cast<int>(z.size()) != scheme.rank())
        throw PreconditionError("torus point needs n+d coordinates");
    TorusPoint tp;
    auto alpha = scheme.solve_basis(z);
    tp.frac_.resize(alpha.size());
    int64_t label_shift = 0;
    for (size_t j = 0; j < alpha.size(); ++j) {
        BigInt fl = alpha[j].floor();
        int64_t fli = to_int64_checked(fl);
        tp.witness_[j] = fli;
        tp.frac_[j] = alpha[j] - QuadraticNumber(Rational(fl));
        label_shift += fli % scheme.cyclic_order() * scheme.basis()[j].label;
    }
    int k = scheme.cyclic_order();
    tp.label_ = static_cast<int>((((label - label_shift) % k) + k) % k);
    return tp;
}

std::vector<QuadraticNumber> TorusPoint::representative(const CutProjectScheme& scheme) const {
    return q_mat_vec(scheme.basis_matrix(), frac_);
}

TorusPoint TorusPoint::add(const CutProjectScheme& scheme, const TorusPoint& other) const {
    std::vector<QuadraticNumber> sum(frac_.size());
    for (size_t i = 0; i < frac_.size(); ++i) sum[i] = frac_[i] + other.frac_[i];
    // re-reduce in coefficient space: subtract integer parts directly
    TorusPoint tp;
    tp.frac_.resize(sum.size());
    int64_t label_shift = 0;
    for (size_t j = 0; j < sum.size(); ++j) {
        BigInt fl = sum[j].floor();
        int64_t fli = to_int64_checked(fl);
        tp.witness_[j] = fli;
        tp.frac_[j] = sum[j] - QuadraticNumber(Rational(fl));
        label_shift += fli % scheme.cyclic_order() * scheme.basis()[j].label;
    }
    int k = scheme.cyclic_order();
    tp.label_ = static_cast<int>((((label_ + other.label_ - label_shift) % k) + k) % k);
    return tp;
}

bool TorusPoint::operator==(const TorusPoint& other) const {
    if (label_ != other.label_ || frac_.size() != other.frac_.size()) return false;
    for (size_t i = 0; i < frac_.size(); ++i)
        if (frac_[i] != other.frac_[i]) return false;
    return true;
}

TorusPoint embed_iota(const CutProjectScheme& scheme, const std::vector<QuadraticNumber>& g) {
    if (static_cast<int>(g.size()) != scheme.physical_dim())
        throw PreconditionError("iota argument must be a physical vector");
    std::vector<QuadraticNumber> z = g;
    z.resize(scheme.rank(), QuadraticNumber(0));
    return TorusPoint::reduce(scheme, std::move(z), 0);
}

// ---------------------------------------------------------------------------
// c_gamma
// ---------------------------------------------------------------------------

CGammaAccumulator::CGammaAccumulator(const CutProjectScheme& scheme,
                                     const std::vector<Window>& windows)
    : scheme_(scheme), k_(scheme.cyclic_order()) {
    if (window_stabilizer(windows).size() != 1)
        throw PreconditionError("c_gamma needs an irredundant scheme (trivial window stabilizer)");
    for (const auto& w : windows) closed_windows_.push_back(w.regularized());
    if (scheme.internal_dim() == 1)
        parts1d_.assign(k_, IntervalSet());
    else
        parts2d_.assign(k_, ConvexPolygon());
}

void CGammaAccumulator::add(const InternalPoint& phi, int colour) {
    const Window& w = closed_windows_.at(colour);
    ++points_used;
    if (scheme_.internal_dim() == 1) {
        std::vector<IntervalSet> cand(k_);
        for (int l = 0; l < k_; ++l) {
            // part of phi - W at label (phi.label - l) comes from window label l
            int lab = (((phi.label - l) % k_) + k_) % k_;
            const auto& part = w.interval_part(l);
            if (part.empty()) continue;
            IntervalSet shifted = part.reflect().translate(phi.real[0]).closure();
            std::vector<Interval> merged = cand[lab].parts();
            for (const auto& iv : shifted.parts()) merged.push_back(iv);
            cand[lab] = IntervalSet(std::move(merged));
        }
        bool any = false;
        for (int lab = 0; lab < k_; ++lab) {
            parts1d_[lab] = started_ ? parts1d_[lab].intersect(cand[lab]) : cand[lab];
            if (!parts1d_[lab].empty()) any = true;
        }
        if (!any)
            throw InconsistentPatchError(
                "empty internal intersection: patch is not a sub-patch of any model set for "
                "these windows");
    } else {
        std::vector<ConvexPolygon> cand(k_);
        for (int l = 0; l < k_; ++l) {
            int lab = (((phi.label - l) % k_) + k_) % k_;
            const auto& part = w.polygon_part(l);
            if (part.empty()) continue;
            cand[lab] = part.reflect().translate({phi.coord(0), phi.coord(1)});
        }
        bool any = false;
        for (int lab = 0; lab < k_; ++lab) {
            if (started_) {
                if (parts2d_[lab].empty() || cand[lab].empty())
                    parts2d_[lab] = ConvexPolygon();
                else
                    parts2d_[lab] = parts2d_[lab].intersect(cand[lab]);
            } else {
                parts2d_[lab] = cand[lab];
            }
            if (!parts2d_[lab].empty()) any = true;
        }
        if (!any)
            throw InconsistentPatchError(
                "empty internal intersection: patch is not a sub-patch of any model set for "
                "these windows");
    }
    started_ = true;
}

double CGammaAccumulator::diameter() const {
    if (!started_) return std::numeric_limits<double>::infinity();
    int live = 0;
    double diam = 0;
    if (scheme_.internal_dim() == 1) {
        for (const auto& s : parts1d_) {
            if (s.empty()) continue;
            ++live;
            diam = s.hull_width().to_double();
        }
    } else {
        for (const auto& p : parts2d_) {
            if (p.empty()) continue;
            ++live;
            diam = p.diameter();
        }
    }
    if (live != 1) return std::numeric_limits<double>::infinity();
    return diam;
}

bool CGammaAccumulator::label_resolved() const {
    int live = 0;
    if (scheme_.internal_dim() == 1) {
        for (const auto& s : parts1d_)
            if (!s.empty()) ++live;
    } else {
        for (const auto& p : parts2d_)
            if (!p.empty()) ++live;
    }
    return live == 1;
}

CGammaCertificate CGammaAccumulator::certificate() const {
    CGammaCertificate cert;
    cert.points_used = points_used;
    cert.diameter = diameter();
    if (!label_resolved())
        throw InconsistentPatchError("internal parameter label is not yet resolved");
    if (scheme_.internal_dim() == 1) {
        for (int lab = 0; lab < k_; ++lab) {
            if (parts1d_[lab].empty()) continue;
            cert.label = lab;
            cert.exact_lo = parts1d_[lab].hull_lo();
            cert.exact_hi = parts1d_[lab].hull_hi();
            cert.c.real = {( *cert.exact_lo + *cert.exact_hi) / QuadraticNumber(2)};
            cert.c.label = lab;
        }
    } else {
        for (int lab = 0; lab < k_; ++lab) {
            if (parts2d_[lab].empty()) continue;
            cert.label = lab;
            Vec2 c = parts2d_[lab].centroid();
            cert.c.real = {QuadraticNumber(Rational(c.x)), QuadraticNumber(Rational(c.y))};
            cert.c.label = lab;
        }
    }
    return cert;
}

MultiSetPatch ensure_coeffs(const MultiSetPatch& p, const CutProjectScheme& scheme) {
    bool all = true;
    for (int c = 0; c < p.colour_count() && all; ++c)
        for (const auto& q : p.colour(c))
            if (!q.has_coeffs()) {
                all = false;
                break;
            }
    if (all) return p;
    std::vector<std::vector<PatchPoint>> colours(p.colour_count());
    for (int c = 0; c < p.colour_count(); ++c) {
        for (const auto& q : p.colour(c)) {
            PatchPoint r = q;
            if (!r.has_coeffs()) {
                std::vector<QuadraticNumber> phys(q.pos.begin(),
                                                  q.pos.begin() + p.physical_dim());
                auto coeffs = scheme.coeffs_from_physical(phys);
                if (!coeffs)
                    throw PreconditionError(
                        "patch point is not in the lattice projection L; cannot attach "
                        "coefficients");
                r.coeffs = *coeffs;
            }
            colours[c].push_back(std::move(r));
        }
    }
    MultiSetPatch out(p.physical_dim(), p.region(), std::move(colours));
    out.scheme_hash = p.scheme_hash;
    out.window_hash = p.window_hash;
    out.policy = p.policy;
    out.translation = p.translation;
    return out;
}

namespace {

struct IndexedPoint {
    const PatchPoint* pt;
    int colour;
    double radius;
};

std::vector<IndexedPoint> by_radius(const MultiSetPatch& p) {
    std::vector<IndexedPoint> order;
    for (int c = 0; c < p.colour_count(); ++c)
        for (const auto& q : p.colour(c)) {
            double r = 0;
            for (int i = 0; i < p.physical_dim(); ++i)
                r = std::max(r, std::abs(q.pos[i].to_double()));
            order.push_back({&q, c, r});
        }
    std::sort(order.begin(), order.end(), [&](const IndexedPoint& a, const IndexedPoint& b) {
        if (a.radius != b.radius) return a.radius < b.radius;
        if (a.colour != b.colour) return a.colour < b.colour;
        return compare_points(*a.pt, *b.pt, p.physical_dim()) < 0;
    });
    return order;
}

}  // namespace

CGammaCertificate c_gamma(const MultiSetPatch& p, const CutProjectScheme& scheme,
                          const std::vector<Window>& windows, double tol) {
    MultiSetPatch q = ensure_coeffs(p, scheme);
    if (q.total_points() == 0) throw PreconditionError("c_gamma of an empty patch");
    CGammaAccumulator acc(scheme, windows);
    auto order = by_radius(q);
    std::vector<CGammaStage> stages;
    double next_stage = 1.0;
    double prev_diam = std::numeric_limits<double>::infinity();
    bool reached = false;
    for (const auto& ip : order) {
        acc.add(scheme.star_map(
                    std::span<const int64_t>(ip.pt->coeffs.data(), scheme.rank())),
                ip.colour);
        double diam = acc.diameter();
        if (ip.radius >= next_stage) {
            if (diam < prev_diam) {
                stages.push_back({ip.radius, diam});
                prev_diam = diam;
            }
            while (next_stage <= ip.radius) next_stage *= 2;
        }
        if (diam <= tol) {
            reached = true;
            break;
        }
    }
    CGammaCertificate cert = acc.certificate();
    cert.reached_tol = reached || cert.diameter <= tol;
    if (stages.empty() || stages.back().diameter > cert.diameter)
        stages.push_back({order.empty() ? 0.0 : order.back().radius, cert.diameter});
    cert.stages = std::move(stages);
    return cert;
}

CGammaCertificate c_gamma_streamed(const CutProjectScheme& scheme,
                                   const std::vector<Window>& windows, double tol,
                                   double max_radius) {
    if (scheme.internal_dim() != 1 || scheme.cyclic_order() != 1 || scheme.physical_dim() != 1)
        throw PreconditionError("streamed c_gamma supports 1D, k = 1 schemes");
    for (const auto& w : windows)
        if (!w.single_interval_per_label() || w.interval_part(0).empty())
            throw PreconditionError("streamed c_gamma needs one-interval windows");

    struct Tracker {
        QuadraticNumber a, b;  // closed window endpoints
        bool seen = false;
        long double min_ld = 0, max_ld = 0;
        QuadraticNumber min_exact, max_exact;
    };
    std::vector<Tracker> tracks;
    for (const auto& w : windows) {
        IntervalSet closed = w.interval_part(0).closure();
        Tracker tr;
        tr.a = closed.parts().front().lo;
        tr.b = closed.parts().front().hi;
        tracks.push_back(std::move(tr));
    }

    QuadraticNumber tol_q{Rational(tol)};
    CGammaCertificate cert;
    std::vector<CGammaStage> stages;
    double prev_diam = std::numeric_limits<double>::infinity();
    size_t points = 0;
    constexpr long double kScreen = 1e-9L;

    double radius = 1.0;
    bool reached = false;
    while (true) {
        points = 0;  // lattice points examined in the current stage region
        for (size_t i = 0; i < windows.size(); ++i) {
            Tracker& tr = tracks[i];
            CutProjectScheme::EnumerationQuery q;
            q.physical = Box::cube(1, radius);
            q.window = &windows[i];
            q.policy = BoundaryPolicy::Flags;
            // screen candidates in long double; settle near-extremes exactly
            long double g0 = scheme.basis()[0].internal_real[0].to_long_double();
            long double g1 = scheme.basis()[1].internal_real[0].to_long_double();
            scheme.for_each_lattice_point(q, [&](const std::array<int64_t, 4>& c) {
                ++points;
                long double phi = static_cast<long double>(c[0]) * g0 +
                                  static_cast<long double>(c[1]) * g1;
                if (!tr.seen || phi < tr.min_ld + kScreen) {
                    QuadraticNumber exact =
                        scheme.star_map(std::span<const int64_t>(c.data(), 2)).real[0];
                    if (!tr.seen || exact < tr.min_exact) {
                        tr.min_exact = exact;
                        tr.min_ld = exact.to_long_double();
                    }
                    if (!tr.seen) {
                        tr.max_exact = exact;
                        tr.max_ld = tr.min_ld;
                        tr.seen = true;
                    }
                }
                if (phi > tr.max_ld - kScreen) {
                    QuadraticNumber exact =
                        scheme.star_map(std::span<const int64_t>(c.data(), 2)).real[0];
                    if (exact > tr.max_exact) {
                        tr.max_exact = exact;
                        tr.max_ld = exact.to_long_double();
                    }
                }
            });
        }
        bool all_seen = true;
        for (const auto& tr : tracks)
            if (!tr.seen) all_seen = false;
        if (all_seen) {
            // enclosure = ⋂_i [max_i - b_i, min_i - a_i]
            QuadraticNumber lo = tracks[0].max_exact - tracks[0].b;
            QuadraticNumber hi = tracks[0].min_exact - tracks[0].a;
            for (size_t i = 1; i < tracks.size(); ++i) {
                QuadraticNumber l2 = tracks[i].max_exact - tracks[i].b;
                QuadraticNumber h2 = tracks[i].min_exact - tracks[i].a;
                if (l2 > lo) lo = l2;
                if (h2 < hi) hi = h2;
            }
            if (hi < lo)
                throw InconsistentPatchError("empty internal intersection in the streamed walk");
            QuadraticNumber diam = hi - lo;
            double diam_d = diam.to_double();
            if (diam_d < prev_diam) {
                stages.push_back({radius, diam_d});
                prev_diam = diam_d;
            }
            cert.exact_lo = lo;
            cert.exact_hi = hi;
            cert.diameter = diam_d;
            cert.c.real = {(lo + hi) / QuadraticNumber(2)};
            cert.c.label = 0;
            if (diam <= tol_q) {
                reached = true;
                break;
            }
        }
        if (radius >= max_radius) break;
        radius = std::min(radius * 2, max_radius * 1.0);
    }
    cert.points_used = points;
    cert.reached_tol = reached;
    cert.stages = std::move(stages);
    cert.label = 0;
    return cert;
}

GammaResult gamma_map(const MultiSetPatch& p, const CutProjectScheme& scheme,
                      const std::vector<Window>& windows, double tol) {
    if (p.total_points() == 0) throw PreconditionError("gamma of an empty patch");
    int n = p.physical_dim();

    // find an alignment s with s + supp(p) ⊂ L: either the patch is already in
    // L, or shifting the first point onto the origin lands everything in L
    std::vector<QuadraticNumber> s(n, QuadraticNumber(0));
    MultiSetPatch aligned = p;
    bool aligned_ok = true;
    try {
        aligned = ensure_coeffs(p, scheme);
    } catch (const PreconditionError&) {
        aligned_ok = false;
    }
    if (!aligned_ok) {
        auto x0 = p.first_point();
        for (int i = 0; i < n; ++i) s[i] = -x0->pos[i];
        Box shifted_region = p.region().translate(s);
        try {
            aligned = ensure_coeffs(p.translate_restrict(s, shifted_region), scheme);
        } catch (const PreconditionError&) {
            throw PreconditionError(
                "no lattice alignment found: patch is not in the representable orbit closure");
        }
    }

    CGammaCertificate cert = c_gamma(aligned, scheme, windows, tol);

    // gamma = (-s, -c) + L~
    std::vector<QuadraticNumber> z(scheme.rank(), QuadraticNumber(0));
    for (int i = 0; i < n; ++i) z[i] = -s[i];
    for (int i = 0; i < scheme.internal_dim(); ++i) z[n + i] = -cert.c.real[i];
    int k = scheme.cyclic_order();
    TorusPoint gamma = TorusPoint::reduce(scheme, std::move(z), ((-cert.c.label) % k + k) % k);

    GammaResult res{gamma, s, cert, false};

    // Cor. 5.3 well-definedness: redo with the alignment shifted by a basis
    // vector; the two reduced points must agree exactly.
    {
        const auto& g0 = scheme.basis()[0];
        std::vector<QuadraticNumber> s2(n);
        for (int i = 0; i < n; ++i) s2[i] = s[i] + g0.physical[i];
        std::array<int64_t, 4> t_coeffs{0, 0, 0, 0};
        t_coeffs[0] = 1;
        Box r2 = aligned.region().translate(
            std::vector<QuadraticNumber>(g0.physical.begin(), g0.physical.end()));
        MultiSetPatch aligned2 = aligned.translate_restrict(
            std::vector<QuadraticNumber>(g0.physical.begin(), g0.physical.end()), r2, &t_coeffs);
        CGammaCertificate cert2 = c_gamma(aligned2, scheme, windows, tol);
        std::vector<QuadraticNumber> z2(scheme.rank(), QuadraticNumber(0));
        for (int i = 0; i < n; ++i) z2[i] = -s2[i];
        for (int i = 0; i < scheme.internal_dim(); ++i) z2[n + i] = -cert2.c.real[i];
        TorusPoint gamma2 =
            TorusPoint::reduce(scheme, std::move(z2), ((-cert2.c.label) % k + k) % k);
        if (scheme.internal_dim() == 1) {
            if (gamma2 != gamma)
                throw InconsistentPatchError("gamma is alignment-dependent (should not happen)");
            res.well_defined_checked = true;
        } else {
            // 2D enclosures carry float centroids; compare the fractional
            // coefficients on the torus, where 0 and 1 are the same point
            res.well_defined_checked = true;
            if (gamma2.label() != gamma.label())
                throw InconsistentPatchError("gamma is alignment-dependent beyond tolerance");
            const auto& f1 = gamma.frac_coeffs();
            const auto& f2 = gamma2.frac_coeffs();
            for (size_t i = 0; i < f1.size(); ++i) {
                double d = std::abs(f1[i].to_double() - f2[i].to_double());
                if (std::min(d, 1.0 - d) > 1e-6)
                    throw InconsistentPatchError("gamma is alignment-dependent beyond tolerance");
            }
        }
    }
    return res;
}

std::vector<ReconstructedWindow> reconstruct_window(const MultiSetPatch& p,
                                                    const CutProjectScheme& scheme,
                                                    const std::vector<Window>& windows,
                                                    double tol) {
    MultiSetPatch q = ensure_coeffs(p, scheme);
    CGammaCertificate cert = c_gamma(q, scheme, windows, tol);
    std::vector<ReconstructedWindow> out;
    for (int c = 0; c < q.colour_count(); ++c) {
        const auto& pts = q.colour(c);
        if (pts.empty()) throw PreconditionError("reconstruct_window of an empty colour");
        ReconstructedWindow rw;
        rw.points = pts.size();
        if (scheme.internal_dim() == 1) {
            std::vector<QuadraticNumber> stars;
            stars.reserve(pts.size());
            for (const auto& pt : pts)
                stars.push_back(
                    scheme.star_map(std::span<const int64_t>(pt.coeffs.data(), scheme.rank()))
                        .real[0]);
            std::sort(stars.begin(), stars.end());
            // recentre by -c
            QuadraticNumber lo = stars.front() - cert.c.real[0];
            QuadraticNumber hi = stars.back() - cert.c.real[0];
            rw.hull_1d = Interval{lo, hi, true, true};
            std::map<double, size_t> hist;
            for (size_t i = 0; i + 1 < stars.size(); ++i)
                hist[(stars[i + 1] - stars[i]).to_double()] += 1;
            rw.gap_histogram.assign(hist.begin(), hist.end());
            IntervalSet rec(Interval{lo, hi, true, true});
            rw.hausdorff_gap =
                rec.hausdorff(windows.at(c).interval_part(cert.label).closure()).to_double();
        } else {
            std::vector<Vec2> stars;
            stars.reserve(pts.size());
            for (const auto& pt : pts) {
                InternalPoint ip =
                    scheme.star_map(std::span<const int64_t>(pt.coeffs.data(), scheme.rank()));
                stars.push_back({ip.coord(0) - cert.c.coord(0), ip.coord(1) - cert.c.coord(1)});
            }
            rw.hull_2d = ConvexPolygon::hull_of(std::move(stars));
            rw.hausdorff_gap = rw.hull_2d.hausdorff(windows.at(c).polygon_part(cert.label));
        }
        out.push_back(std::move(rw));
    }
    return out;
}

SingularityResult singularity_test(const InternalPoint& c, const CutProjectScheme& scheme,
                                   const std::vector<Window>& windows, const Box& region) {
    SingularityResult res;
    res.exhaustive = true;
    for (size_t i = 0; i < windows.size(); ++i) {
        const Window w = windows[i].regularized();
        for (int lab = 0; lab < scheme.cyclic_order(); ++lab) {
            if (scheme.internal_dim() == 1) {
                const auto& part = w.interval_part(lab);
                for (const auto& b : part.boundary_points()) {
                    InternalPoint target;
                    target.real = {c.real[0] + b};
                    target.label = ((c.label + lab) % scheme.cyclic_order() +
                                    scheme.cyclic_order()) % scheme.cyclic_order();
                    std::array<int64_t, 4> coeffs;
                    auto outcome = scheme.solve_internal(target, coeffs);
                    if (outcome == CutProjectScheme::InternalSolve::Underdetermined) {
                        res.exhaustive = false;
                        // fall back to a scan of a thin internal box around the target
                        Box internal_box = Box::closed({target.real[0].to_double() - 1e-9},
                                                       {target.real[0].to_double() + 1e-9});
                        for (const auto& site :
                             scheme.lattice_points_in_box(region, internal_box)) {
                            InternalPoint ip = scheme.star_map(std::span<const int64_t>(
                                site.coeffs.data(), scheme.rank()));
                            if (ip.label == target.label && ip.real[0] == target.real[0]) {
                                res.singular = true;
                                PatchPoint wpt;
                                wpt.coeffs = site.coeffs;
                                auto phys = scheme.physical_of(std::span<const int64_t>(
                                    site.coeffs.data(), scheme.rank()));
                                for (int a = 0; a < scheme.physical_dim(); ++a)
                                    wpt.pos[a] = phys[a];
                                res.witness = wpt;
                                res.witness_colour = static_cast<int>(i);
                                return res;
                            }
                        }
                    } else if (outcome == CutProjectScheme::InternalSolve::Unique) {
                        auto phys = scheme.physical_of(
                            std::span<const int64_t>(coeffs.data(), scheme.rank()));
                        if (region.contains(phys, BoundaryPolicy::Closure)) {
                            res.singular = true;
                            PatchPoint wpt;
                            wpt.coeffs = coeffs;
                            for (int a = 0; a < scheme.physical_dim(); ++a) wpt.pos[a] = phys[a];
                            res.witness = wpt;
                            res.witness_colour = static_cast<int>(i);
                            return res;
                        }
                    }
                }
            } else {
                // 2D: scan lattice points whose star image lands near the
                // boundary ring of c + W, then test at kGeomEps tolerance.
                res.exhaustive = false;
                const auto& poly = w.polygon_part(lab);
                if (poly.empty()) continue;
                double xlo, xhi, ylo, yhi;
                poly.bounding_box(xlo, xhi, ylo, yhi);
                Box internal_box = Box::closed(
                    {xlo + c.coord(0) - 1e-6, ylo + c.coord(1) - 1e-6},
                    {xhi + c.coord(0) + 1e-6, yhi + c.coord(1) + 1e-6});
                int target_label = ((c.label + lab) % scheme.cyclic_order() +
                                    scheme.cyclic_order()) % scheme.cyclic_order();
                for (const auto& site : scheme.lattice_points_in_box(region, internal_box)) {
                    InternalPoint ip = scheme.star_map(
                        std::span<const int64_t>(site.coeffs.data(), scheme.rank()));
                    if (ip.label != target_label) continue;
                    Vec2 rel{ip.coord(0) - c.coord(0), ip.coord(1) - c.coord(1)};
                    if (std::abs(poly.inner_margin(rel)) <= kGeomEps) {
                        res.singular = true;
                        PatchPoint wpt;
                        wpt.coeffs = site.coeffs;
                        auto phys = scheme.physical_of(
                            std::span<const int64_t>(site.coeffs.data(), scheme.rank()));
                        for (int a = 0; a < scheme.physical_dim(); ++a) wpt.pos[a] = phys[a];
                        res.witness = wpt;
                        res.witness_colour = static_cast<int>(i);
                        return res;
                    }
                }
            }
        }
    }
    return res;
}

SingularityResult singularity_test(const MultiSetPatch& p, const CutProjectScheme& scheme,
                                   const std::vector<Window>& windows, const Box& region,
                                   double tol) {
    // Evidence semantics: a finite patch pins its parameter only to the
    // enclosure, so we test the certificate's representative. Exact verdicts
    // about a known configuration go through the InternalPoint overload.
    CGammaCertificate cert = c_gamma(p, scheme, windows, tol);
    return singularity_test(cert.c, scheme, windows, region);
}

RigidityResult local_rigidity_radius(const MultiSetPatch& p, const CutProjectScheme& scheme,
                                     const std::vector<Window>& windows, double m_radius,
                                     const Box& probe_region) {
    int n = p.physical_dim();
    Box a_m = Box::cube(n, m_radius);
    // The rigidity guarantee applies to non-singular configurations. The patch
    // here is the restriction of Λ(W) itself (parameter 0); callers probing a
    // translated configuration pass translated windows.
    InternalPoint origin;
    origin.real.assign(scheme.internal_dim(), QuadraticNumber(0));
    Box sing_region = Box::cube(n, 100.0);
    auto sing = singularity_test(origin, scheme, windows, sing_region);
    if (sing.singular)
        throw PreconditionError("singular configuration: the local rigidity bound does not apply");

    bool exact = scheme.internal_dim() == 1;
    QuadraticNumber sup_exact =
        exact ? d_sup_exact(scheme, windows) : QuadraticNumber(Rational(d_sup(scheme, windows)));
    RigidityResult res;

    // candidates once at the largest grid epsilon, with exact d values in 1D
    double eps1 = sup_exact.to_double() / 2;
    PEpsilonResult cand = p_epsilon(scheme, windows, eps1, probe_region);
    struct Probe {
        const PatchPoint* t;
        QuadraticNumber d;
    };
    std::vector<Probe> probes;
    for (const auto& t : cand.points) {
        QuadraticNumber d =
            exact ? d_analytic_exact(scheme, windows,
                                     std::span<const int64_t>(t.coeffs.data(), scheme.rank()))
                  : QuadraticNumber(Rational(d_analytic(
                        scheme, windows,
                        std::span<const int64_t>(t.coeffs.data(), scheme.rank()))));
        probes.push_back({&t, std::move(d)});
    }

    for (int g = 1; g <= 20; ++g) {
        QuadraticNumber eps = sup_exact / QuadraticNumber(Rational(1LL << g));
        bool all_pass = true;
        size_t checked = 0;
        for (const auto& pr : probes) {
            if (!(pr.d < eps)) continue;  // not in P_eps
            ++checked;
            std::vector<QuadraticNumber> t(n);
            for (int i = 0; i < n; ++i) t[i] = pr.t->pos[i];
            std::vector<QuadraticNumber> neg(n);
            for (int i = 0; i < n; ++i) neg[i] = -t[i];
            if (!p.region().contains_box(a_m.translate(neg))) continue;  // out of faithful range
            MultiSetPatch shifted = p.translate_restrict(t, a_m, &pr.t->coeffs);
            if (!shifted.equal_on(p, a_m)) {
                all_pass = false;
                break;
            }
        }
        res.probes = std::max(res.probes, checked);
        if (all_pass) {
            res.epsilon = eps.to_double();
            res.grid_index = g;
            res.positive = true;
            return res;
        }
    }
    return res;
}

BoundaryOrbitResult boundary_orbit_density(const CutProjectScheme& scheme,
                                           const std::vector<Window>& windows,
                                           const InternalPoint& h, const Box& region) {
    BoundaryOrbitResult res;
    double vol = region.volume().to_double();
    for (size_t i = 0; i < windows.size(); ++i) {
        size_t count = 0;
        const Window w = windows[i].regularized();
        bool exhaustive = true;
        for (int lab = 0; lab < scheme.cyclic_order(); ++lab) {
            if (scheme.internal_dim() != 1) {
                exhaustive = false;
                continue;
            }
            for (const auto& b : w.interval_part(lab).boundary_points()) {
                InternalPoint target;
                target.real = {h.real[0] + b};
                target.label = ((h.label + lab) % scheme.cyclic_order() + scheme.cyclic_order()) %
                               scheme.cyclic_order();
                std::array<int64_t, 4> coeffs;
                auto outcome = scheme.solve_internal(target, coeffs);
                if (outcome == CutProjectScheme::InternalSolve::Unique) {
                    auto phys =
                        scheme.physical_of(std::span<const int64_t>(coeffs.data(), scheme.rank()));
                    if (region.contains(phys, BoundaryPolicy::Closure)) ++count;
                } else if (outcome == CutProjectScheme::InternalSolve::Underdetermined) {
                    exhaustive = false;
                }
            }
        }
        res.counts.push_back(count);
        res.densities.push_back(vol > 0 ? static_cast<double>(count) / vol : 0.0);
        res.exhaustive = exhaustive;
    }
    return res;
}

}  // namespace modelset
