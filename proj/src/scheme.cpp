#include "modelset/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "modelset/errors.hpp"
#include "modelset/report.hpp"

namespace modelset {

using ordered_json = nlohmann::ordered_json;

namespace {

// Margin for settling long-double comparisons by exact arithmetic. Rigorous
// upper bound on accumulated rounding error for coefficients up to ~1e8.
constexpr long double kExactMargin = 1e-7L;
constexpr long double kTinyEntry = 1e-14L;

Rational rational_from_json(const nlohmann::json& v) {
    std::optional<Rational> r;
    if (v.is_string())
        r = parse_rational(v.get<std::string>());
    else if (v.is_number_integer())
        r = Rational(v.get<long long>());
    else if (v.is_number_float())
        r = Rational(v.get<double>());
    if (!r) throw ConfigError("bad rational value in config: " + v.dump());
    return *r;
}

QuadraticNumber quad_from_json(const nlohmann::json& v, int field_d) {
    if (!v.is_array() || v.size() != 2)
        throw ConfigError("quadratic entries must be pairs [a, b] meaning a + b*sqrt(D)");
    Rational a = rational_from_json(v[0]);
    Rational b = rational_from_json(v[1]);
    return QuadraticNumber(a, b, b == 0 ? 0 : field_d);
}

ordered_json quad_to_json(const QuadraticNumber& q) {
    return ordered_json::array(
        {rational_to_string(q.rational_part()), rational_to_string(q.radical_part())});
}

}  // namespace

CutProjectScheme::CutProjectScheme(int field_d, int n, int d, int k,
                                   std::vector<Generator> basis)
    : field_d_(field_d), n_(n), d_(d), k_(k), basis_(std::move(basis)) {
    validate();
}

void CutProjectScheme::validate() {
    if (n_ < 1 || n_ > 2 || d_ < 1 || d_ > 2) throw SchemeError("dimensions must satisfy n,d in {1,2}");
    if (k_ < 1) throw SchemeError("cyclic order must be >= 1");
    if (field_d_ < 0) throw SchemeError("field discriminant must be a positive squarefree integer");
    int nd = n_ + d_;
    if (static_cast<int>(basis_.size()) != nd)
        throw SchemeError("scheme needs exactly n+d lattice generators");
    for (auto& g : basis_) {
        if (static_cast<int>(g.physical.size()) != n_ ||
            static_cast<int>(g.internal_real.size()) != d_)
            throw SchemeError("generator coordinate counts must match n and d");
        g.label = ((g.label % k_) + k_) % k_;
    }

    // real basis matrix: rows = coordinates, cols = generators
    bmat_.assign(nd, std::vector<QuadraticNumber>(nd, QuadraticNumber(0)));
    for (int j = 0; j < nd; ++j) {
        for (int a = 0; a < n_; ++a) bmat_[a][j] = basis_[j].physical[a];
        for (int a = 0; a < d_; ++a) bmat_[n_ + a][j] = basis_[j].internal_real[a];
    }
    QuadraticNumber det = q_det(bmat_);
    if (det.is_zero()) throw SchemeError("real basis matrix is singular: lattice not cocompact");
    auto inv = q_inverse(bmat_);
    binv_ = std::move(*inv);
    covolume_ = QuadraticNumber(Rational(k_)) * det.abs();

    // pi_1 injectivity: no nonzero rational (hence integer) combination of the
    // generators has zero physical part. Splitting each quadratic coordinate
    // into rational and radical parts gives a 2n x (n+d) rational matrix whose
    // kernel must be trivial, i.e. rank == n+d.
    RMatrix phys_mat(2 * n_, std::vector<Rational>(nd, Rational(0)));
    for (int j = 0; j < nd; ++j)
        for (int a = 0; a < n_; ++a) {
            phys_mat[2 * a][j] = basis_[j].physical[a].rational_part();
            phys_mat[2 * a + 1][j] = basis_[j].physical[a].radical_part();
        }
    if (rational_rank(phys_mat) != nd)
        throw SchemeError("physical projection is not injective on the lattice");

    // pi_2 density: per internal axis some pair of generator values must have
    // an irrational ratio, and the cyclic labels must generate Z/k.
    for (int a = 0; a < d_; ++a) {
        std::vector<QuadraticNumber> vals;
        for (const auto& g : basis_)
            if (!g.internal_real[a].is_zero()) vals.push_back(g.internal_real[a]);
        bool dense = false;
        for (size_t i = 0; i < vals.size() && !dense; ++i)
            for (size_t j = i + 1; j < vals.size() && !dense; ++j)
                if (!(vals[i] / vals[j]).is_rational()) dense = true;
        if (!dense)
            throw SchemeError("internal projection not dense: axis " + std::to_string(a) +
                              " has no irrational generator ratio");
    }
    if (k_ > 1) {
        int g = k_;
        for (const auto& gen : basis_) g = std::gcd(g, gen.label);
        if (g != 1) throw SchemeError("cyclic labels do not generate Z/k");
    }
}

std::vector<QuadraticNumber> CutProjectScheme::physical_of(std::span<const int64_t> coeffs) const {
    std::vector<QuadraticNumber> out(n_, QuadraticNumber(0));
    for (int j = 0; j < rank(); ++j) {
        if (coeffs[j] == 0) continue;
        QuadraticNumber c(Rational(static_cast<long long>(coeffs[j])));
        for (int a = 0; a < n_; ++a) out[a] += c * basis_[j].physical[a];
    }
    return out;
}

InternalPoint CutProjectScheme::star_map(std::span<const int64_t> coeffs) const {
    InternalPoint ip;
    ip.real.assign(d_, QuadraticNumber(0));
    for (int j = 0; j < rank(); ++j) {
        if (coeffs[j] == 0) continue;
        QuadraticNumber c(Rational(static_cast<long long>(coeffs[j])));
        for (int a = 0; a < d_; ++a) ip.real[a] += c * basis_[j].internal_real[a];
    }
    ip.label = label_of(coeffs);
    return ip;
}

int CutProjectScheme::label_of(std::span<const int64_t> coeffs) const {
    int64_t lab = 0;
    for (int j = 0; j < rank(); ++j) lab += coeffs[j] % k_ * basis_[j].label;
    return static_cast<int>(((lab % k_) + k_) % k_);
}

std::vector<QuadraticNumber> CutProjectScheme::solve_basis(
    const std::vector<QuadraticNumber>& z) const {
    return q_mat_vec(binv_, z);
}

std::optional<std::array<int64_t, 4>> CutProjectScheme::coeffs_from_physical(
    const std::vector<QuadraticNumber>& phys) const {
    int nd = rank();
    RMatrix a(2 * n_, std::vector<Rational>(nd, Rational(0)));
    std::vector<Rational> rhs(2 * n_, Rational(0));
    for (int j = 0; j < nd; ++j)
        for (int ax = 0; ax < n_; ++ax) {
            a[2 * ax][j] = basis_[j].physical[ax].rational_part();
            a[2 * ax + 1][j] = basis_[j].physical[ax].radical_part();
        }
    for (int ax = 0; ax < n_; ++ax) {
        rhs[2 * ax] = phys[ax].rational_part();
        rhs[2 * ax + 1] = phys[ax].radical_part();
    }
    auto res = rational_solve(std::move(a), std::move(rhs));
    if (!res.consistent || !res.unique) return std::nullopt;
    std::array<int64_t, 4> out{0, 0, 0, 0};
    for (int j = 0; j < nd; ++j) {
        const Rational& c = res.solution[j];
        if (denominator(c) != 1) return std::nullopt;
        BigInt num = numerator(c);
        if (num > BigInt(INT64_MAX / 2) || num < BigInt(INT64_MIN / 2)) return std::nullopt;
        out[j] = num.convert_to<int64_t>();
    }
    return out;
}

CutProjectScheme::InternalSolve CutProjectScheme::solve_internal(const InternalPoint& v,
                                                                 std::array<int64_t, 4>& out) const {
    int nd = rank();
    RMatrix a(2 * d_, std::vector<Rational>(nd, Rational(0)));
    std::vector<Rational> rhs(2 * d_, Rational(0));
    for (int j = 0; j < nd; ++j)
        for (int ax = 0; ax < d_; ++ax) {
            a[2 * ax][j] = basis_[j].internal_real[ax].rational_part();
            a[2 * ax + 1][j] = basis_[j].internal_real[ax].radical_part();
        }
    for (int ax = 0; ax < d_; ++ax) {
        rhs[2 * ax] = v.real[ax].rational_part();
        rhs[2 * ax + 1] = v.real[ax].radical_part();
    }
    auto res = rational_solve(std::move(a), std::move(rhs));
    if (!res.consistent) return InternalSolve::None;
    if (!res.unique) return InternalSolve::Underdetermined;
    out = {0, 0, 0, 0};
    for (int j = 0; j < nd; ++j) {
        const Rational& c = res.solution[j];
        if (denominator(c) != 1) return InternalSolve::None;
        BigInt num = numerator(c);
        if (num > BigInt(INT64_MAX / 2) || num < BigInt(INT64_MIN / 2)) return InternalSolve::None;
        out[j] = num.convert_to<int64_t>();
    }
    if (label_of(out) != ((v.label % k_) + k_) % k_) return InternalSolve::None;
    return InternalSolve::Unique;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

struct CompLD {
    long double lo, hi;
    const Interval* exact;
};

struct EnumContext {
    const CutProjectScheme* scheme;
    int nd, n, d, k;
    long double B[4][4];       // [axis][generator]
    long double glo[4], ghi[4];  // global coefficient ranges
    int perm[4];               // loop order, perm[nd-1] innermost
    long double slack_lo[4][4], slack_hi[4][4];  // [level][axis]
    // per-axis targets (hull, for propagation)
    long double axis_lo[4], axis_hi[4];
    // exact axis constraints (physical axes and internal-box axes)
    const Interval* axis_iv[4];
    const Window* window;
    BoundaryPolicy policy;
    const Box* physical;
    const Box* internal_box;
    std::vector<std::vector<CompLD>> comps;  // per label, 1D windows
    const std::function<void(const std::array<int64_t, 4>&)>* emit;
};

bool exact_accept(const EnumContext& ctx, const std::array<int64_t, 4>& coeffs) {
    auto phys = ctx.scheme->physical_of(std::span<const int64_t>(coeffs.data(), ctx.nd));
    if (!ctx.physical->contains(phys)) return false;
    if (ctx.internal_box) {
        InternalPoint ip = ctx.scheme->star_map(std::span<const int64_t>(coeffs.data(), ctx.nd));
        if (!ctx.internal_box->contains(ip.real)) return false;
    }
    if (ctx.window) {
        InternalPoint ip = ctx.scheme->star_map(std::span<const int64_t>(coeffs.data(), ctx.nd));
        if (!ctx.window->contains(ip, ctx.policy)) return false;
    }
    return true;
}

void enumerate_level(EnumContext& ctx, int level, std::array<int64_t, 4>& coeffs,
                     long double partial[4], int64_t label_partial) {
    int gen = ctx.perm[level];
    long double lo = ctx.glo[gen], hi = ctx.ghi[gen];
    bool innermost = level == ctx.nd - 1;
    for (int a = 0; a < ctx.nd; ++a) {
        long double w = ctx.B[a][gen];
        if (std::abs(w) <= kTinyEntry) continue;
        long double room_lo = ctx.axis_lo[a] - partial[a] -
                              (innermost ? 0.0L : ctx.slack_hi[level][a]);
        long double room_hi = ctx.axis_hi[a] - partial[a] -
                              (innermost ? 0.0L : ctx.slack_lo[level][a]);
        long double c1 = room_lo / w, c2 = room_hi / w;
        if (c1 > c2) std::swap(c1, c2);
        lo = std::max(lo, c1);
        hi = std::min(hi, c2);
    }
    if (lo > hi + 2) return;
    int64_t c_lo = static_cast<int64_t>(floorl(lo)) - 1;
    int64_t c_hi = static_cast<int64_t>(ceill(hi)) + 1;

    if (!innermost) {
        for (int64_t c = c_lo; c <= c_hi; ++c) {
            coeffs[gen] = c;
            long double next_partial[4];
            for (int a = 0; a < ctx.nd; ++a)
                next_partial[a] = partial[a] + static_cast<long double>(c) * ctx.B[a][gen];
            enumerate_level(ctx, level + 1, coeffs, next_partial,
                            label_partial + c % ctx.k * ctx.scheme->basis()[gen].label);
        }
        coeffs[gen] = 0;
        return;
    }

    for (int64_t c = c_lo; c <= c_hi; ++c) {
        coeffs[gen] = c;
        bool needs_exact = false;
        bool reject = false;
        long double vals[4];
        for (int a = 0; a < ctx.nd && !reject; ++a) {
            vals[a] = partial[a] + static_cast<long double>(c) * ctx.B[a][gen];
            if (!ctx.axis_iv[a]) continue;  // window axis, handled below
            long double vlo = ctx.axis_lo[a], vhi = ctx.axis_hi[a];
            if (vals[a] < vlo - kExactMargin || vals[a] > vhi + kExactMargin)
                reject = true;
            else if (vals[a] < vlo + kExactMargin || vals[a] > vhi - kExactMargin)
                needs_exact = true;
        }
        if (reject) continue;

        if (ctx.window && !needs_exact) {
            int lab = static_cast<int>(
                (((label_partial + c % ctx.k * ctx.scheme->basis()[gen].label) % ctx.k) + ctx.k) %
                ctx.k);
            if (ctx.d == 1) {
                long double v = vals[ctx.n];
                bool certain_in = false, borderline = false;
                for (const auto& comp : ctx.comps[lab]) {
                    if (v > comp.lo + kExactMargin && v < comp.hi - kExactMargin) {
                        certain_in = true;
                        break;
                    }
                    if (v > comp.lo - kExactMargin && v < comp.hi + kExactMargin) borderline = true;
                }
                if (!certain_in && !borderline) continue;
                if (!certain_in) needs_exact = true;
            } else {
                // 2D windows carry floating vertices; the polygon test is the
                // decision procedure at kGeomEps tolerance.
                const auto& poly = ctx.window->polygon_part(lab);
                if (poly.empty()) continue;
                if (!poly.contains({static_cast<double>(vals[ctx.n]),
                                    static_cast<double>(vals[ctx.n + 1])},
                                   ctx.policy))
                    continue;
            }
        }

        if (needs_exact) {
            if (!exact_accept(ctx, coeffs)) continue;
        }
        (*ctx.emit)(coeffs);
    }
    coeffs[gen] = 0;
}

}  // namespace

void CutProjectScheme::for_each_lattice_point(
    const EnumerationQuery& q,
    const std::function<void(const std::array<int64_t, 4>&)>& fn) const {
    int nd = rank();
    if (q.physical.dim() != n_) throw PreconditionError("physical box dimension mismatch");
    if (q.physical.degenerate()) return;
    if ((q.internal_box == nullptr) == (q.window == nullptr))
        throw PreconditionError("enumeration needs exactly one internal constraint");
    if (q.internal_box && q.internal_box->dim() != d_)
        throw PreconditionError("internal box dimension mismatch");
    if (q.internal_box && q.internal_box->degenerate()) return;
    if (q.window && q.window->empty()) return;

    EnumContext ctx;
    ctx.scheme = this;
    ctx.nd = nd;
    ctx.n = n_;
    ctx.d = d_;
    ctx.k = k_;
    ctx.window = q.window;
    ctx.policy = q.policy;
    ctx.physical = &q.physical;
    ctx.internal_box = q.internal_box;
    ctx.emit = &fn;

    for (int a = 0; a < nd; ++a)
        for (int j = 0; j < nd; ++j) ctx.B[a][j] = bmat_[a][j].to_long_double();

    // axis targets
    for (int a = 0; a < n_; ++a) {
        ctx.axis_iv[a] = &q.physical.axis(a);
        ctx.axis_lo[a] = q.physical.axis(a).lo.to_long_double();
        ctx.axis_hi[a] = q.physical.axis(a).hi.to_long_double();
    }
    if (q.internal_box) {
        for (int a = 0; a < d_; ++a) {
            ctx.axis_iv[n_ + a] = &q.internal_box->axis(a);
            ctx.axis_lo[n_ + a] = q.internal_box->axis(a).lo.to_long_double();
            ctx.axis_hi[n_ + a] = q.internal_box->axis(a).hi.to_long_double();
        }
    } else {
        std::vector<double> wlo, whi;
        q.window->bounding_box(wlo, whi);
        for (int a = 0; a < d_; ++a) {
            ctx.axis_iv[n_ + a] = nullptr;
            ctx.axis_lo[n_ + a] = static_cast<long double>(wlo[a]) - 1e-6L;
            ctx.axis_hi[n_ + a] = static_cast<long double>(whi[a]) + 1e-6L;
        }
        if (d_ == 1) {
            ctx.comps.resize(k_);
            for (int lab = 0; lab < k_; ++lab)
                for (const auto& p : q.window->interval_part(lab).parts())
                    ctx.comps[lab].push_back(
                        CompLD{p.lo.to_long_double(), p.hi.to_long_double(), &p});
        }
    }

    // global coefficient ranges from the inverse basis matrix
    for (int i = 0; i < nd; ++i) {
        long double lo = 0, hi = 0;
        for (int j = 0; j < nd; ++j) {
            long double w = binv_[i][j].to_long_double();
            long double a = w * ctx.axis_lo[j], b = w * ctx.axis_hi[j];
            lo += std::min(a, b);
            hi += std::max(a, b);
        }
        ctx.glo[i] = lo - 1;
        ctx.ghi[i] = hi + 1;
    }

    // loop order: generators with more zero entries run on the outside; the
    // innermost generator should touch every axis so its range is tight.
    std::vector<int> order(nd);
    for (int i = 0; i < nd; ++i) order[i] = i;
    auto zero_count = [&](int j) {
        int z = 0;
        for (int a = 0; a < nd; ++a)
            if (std::abs(ctx.B[a][j]) <= kTinyEntry) ++z;
        return z;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return zero_count(x) > zero_count(y); });
    for (int i = 0; i < nd; ++i) ctx.perm[i] = order[i];

    // slack intervals: contribution hull of all deeper loop levels, per axis
    for (int lvl = 0; lvl < nd; ++lvl)
        for (int a = 0; a < nd; ++a) {
            long double lo = 0, hi = 0;
            for (int deeper = lvl + 1; deeper < nd; ++deeper) {
                int j = ctx.perm[deeper];
                long double w = ctx.B[a][j];
                long double x = w * ctx.glo[j], y = w * ctx.ghi[j];
                lo += std::min(x, y);
                hi += std::max(x, y);
            }
            ctx.slack_lo[lvl][a] = lo;
            ctx.slack_hi[lvl][a] = hi;
        }

    std::array<int64_t, 4> coeffs{0, 0, 0, 0};
    long double partial[4] = {0, 0, 0, 0};
    enumerate_level(ctx, 0, coeffs, partial, 0);
}

std::vector<LatticeSite> CutProjectScheme::lattice_points_in_box(const Box& physical_box,
                                                                 const Box& internal_box) const {
    EnumerationQuery q;
    q.physical = physical_box;
    q.internal_box = &internal_box;
    std::vector<LatticeSite> out;
    for_each_lattice_point(q, [&](const std::array<int64_t, 4>& c) { out.push_back({c}); });
    std::sort(out.begin(), out.end(),
              [](const LatticeSite& a, const LatticeSite& b) { return a.coeffs < b.coeffs; });
    return out;
}

MultiSetPatch CutProjectScheme::enumerate_model_set(const std::vector<Window>& windows,
                                                    const Box& region,
                                                    BoundaryPolicy policy) const {
    if (region.dim() != n_) throw PreconditionError("region dimension mismatch");
    std::vector<std::vector<PatchPoint>> colours(windows.size());
    for (size_t i = 0; i < windows.size(); ++i) {
        if (windows[i].empty()) continue;  // empty window gives an empty colour
        if (windows[i].has_empty_interior())
            throw PreconditionError("window " + std::to_string(i) + " has empty interior");
        EnumerationQuery q;
        q.physical = region;
        q.window = &windows[i];
        q.policy = policy;
        for_each_lattice_point(q, [&](const std::array<int64_t, 4>& c) {
            PatchPoint p;
            p.coeffs = c;
            auto phys = physical_of(std::span<const int64_t>(c.data(), rank()));
            for (int a = 0; a < n_; ++a) p.pos[a] = phys[a];
            colours[i].push_back(std::move(p));
        });
    }
    MultiSetPatch patch(n_, region, std::move(colours));
    patch.scheme_hash = hash();
    patch.window_hash = windows_hash(windows);
    patch.policy = policy_name(policy);
    return patch;
}

// ---------------------------------------------------------------------------
// JSON and hashing
// ---------------------------------------------------------------------------

ordered_json CutProjectScheme::to_json() const {
    ordered_json j;
    j["D"] = field_d_;
    j["n"] = n_;
    j["d"] = d_;
    j["k"] = k_;
    ordered_json basis = ordered_json::array();
    for (const auto& g : basis_) {
        ordered_json gen;
        ordered_json phys = ordered_json::array(), internal = ordered_json::array();
        for (const auto& q : g.physical) phys.push_back(quad_to_json(q));
        for (const auto& q : g.internal_real) internal.push_back(quad_to_json(q));
        gen["physical"] = phys;
        gen["internal"] = internal;
        gen["label"] = g.label;
        basis.push_back(gen);
    }
    j["basis"] = basis;
    return j;
}

CutProjectScheme CutProjectScheme::from_json(const nlohmann::json& j) {
    try {
        int field_d = j.at("D").get<int>();
        int n = j.at("n").get<int>();
        int d = j.at("d").get<int>();
        int k = j.value("k", 1);
        std::vector<Generator> basis;
        for (const auto& gj : j.at("basis")) {
            Generator g;
            for (const auto& e : gj.at("physical")) g.physical.push_back(quad_from_json(e, field_d));
            for (const auto& e : gj.at("internal"))
                g.internal_real.push_back(quad_from_json(e, field_d));
            g.label = gj.value("label", 0);
            basis.push_back(std::move(g));
        }
        return CutProjectScheme(field_d, n, d, k, std::move(basis));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad scheme config: ") + e.what());
    }
}

std::string CutProjectScheme::hash() const { return stable_hash_hex(to_json().dump()); }

std::string policy_name(BoundaryPolicy p) {
    switch (p) {
        case BoundaryPolicy::Flags: return "half-open";
        case BoundaryPolicy::Interior: return "interior";
        case BoundaryPolicy::Closure: return "closure";
    }
    return "half-open";
}

BoundaryPolicy policy_from_name(const std::string& s) {
    if (s == "half-open" || s == "flags") return BoundaryPolicy::Flags;
    if (s == "interior") return BoundaryPolicy::Interior;
    if (s == "closure") return BoundaryPolicy::Closure;
    throw ConfigError("unknown boundary policy: " + s);
}

ordered_json windows_to_json(const std::vector<Window>& windows) {
    ordered_json out = ordered_json::array();
    for (const auto& w : windows) {
        ordered_json parts = ordered_json::array();
        for (int lab = 0; lab < w.cyclic_order(); ++lab) {
            if (w.is_1d()) {
                const auto& set = w.interval_part(lab);
                if (set.empty()) continue;
                ordered_json part;
                part["label"] = lab;
                ordered_json ivs = ordered_json::array();
                for (const auto& iv : set.parts()) {
                    ordered_json o;
                    o["lo"] = quad_to_json(iv.lo);
                    o["hi"] = quad_to_json(iv.hi);
                    o["lo_closed"] = iv.lo_closed;
                    o["hi_closed"] = iv.hi_closed;
                    ivs.push_back(o);
                }
                part["intervals"] = ivs;
                parts.push_back(part);
            } else {
                const auto& poly = w.polygon_part(lab);
                if (poly.empty()) continue;
                ordered_json part;
                part["label"] = lab;
                ordered_json vs = ordered_json::array();
                for (const auto& v : poly.vertices()) vs.push_back(ordered_json::array({v.x, v.y}));
                part["polygon"] = vs;
                parts.push_back(part);
            }
        }
        ordered_json wj;
        wj["parts"] = parts;
        out.push_back(wj);
    }
    return out;
}

std::vector<Window> windows_from_json(const nlohmann::json& j, int k, int d, int field_d) {
    std::vector<Window> out;
    try {
        for (const auto& wj : j) {
            std::vector<IntervalSet> sets(k);
            std::vector<ConvexPolygon> polys(k);
            bool is_poly = false;
            for (const auto& part : wj.at("parts")) {
                int lab = part.value("label", 0);
                if (lab < 0 || lab >= k) throw ConfigError("window label out of range");
                if (part.contains("polygon")) {
                    is_poly = true;
                    std::vector<Vec2> vs;
                    for (const auto& v : part.at("polygon"))
                        vs.push_back({v[0].get<double>(), v[1].get<double>()});
                    polys[lab] = ConvexPolygon(std::move(vs));
                } else {
                    std::vector<Interval> ivs = sets[lab].parts();
                    for (const auto& iv : part.at("intervals")) {
                        Interval r{quad_from_json(iv.at("lo"), field_d),
                                   quad_from_json(iv.at("hi"), field_d),
                                   iv.value("lo_closed", true), iv.value("hi_closed", true)};
                        ivs.push_back(std::move(r));
                    }
                    sets[lab] = IntervalSet(std::move(ivs));
                }
            }
            out.push_back(is_poly ? Window::polygons(k, std::move(polys))
                                  : Window::intervals(k, std::move(sets)));
            if (is_poly != (d == 2))
                throw ConfigError("window kind does not match internal dimension");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad windows config: ") + e.what());
    }
    return out;
}

std::string windows_hash(const std::vector<Window>& windows) {
    return stable_hash_hex(windows_to_json(windows).dump());
}

SchemeConfig scheme_config_from_json(const nlohmann::json& j) {
    CutProjectScheme scheme = CutProjectScheme::from_json(j);
    std::vector<Window> windows;
    if (j.contains("windows"))
        windows = windows_from_json(j.at("windows"), scheme.cyclic_order(), scheme.internal_dim(),
                                    scheme.field_d());
    return SchemeConfig{j.value("name", ""), std::move(scheme), std::move(windows)};
}

SchemeConfig load_scheme_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scheme config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad JSON in ") + path + ": " + e.what());
    }
    return scheme_config_from_json(j);
}

ordered_json scheme_config_to_json(const SchemeConfig& cfg) {
    ordered_json j;
    if (!cfg.name.empty()) j["name"] = cfg.name;
    ordered_json sj = cfg.scheme.to_json();
    for (auto& [key, value] : sj.items()) j[key] = value;
    j["windows"] = windows_to_json(cfg.windows);
    return j;
}

std::pair<CutProjectScheme, std::vector<Window>> irredundant_reduction(
    const CutProjectScheme& scheme, const std::vector<Window>& windows) {
    auto stab = window_stabilizer(windows);
    int k = scheme.cyclic_order();
    int order = static_cast<int>(stab.size());
    if (order <= 1) return {scheme, windows};
    if (k % order != 0) throw SchemeError("stabilizer size does not divide k");
    int kp = k / order;
    for (int i = 0; i < order; ++i)
        if (stab[i] != i * kp)
            throw SchemeError("stabilizer is not the subgroup generated by k/|I|");

    // reduced windows: one part per residue mod k'; parts across each I-orbit
    // must agree exactly (flags included) so point sets are preserved verbatim
    std::vector<Window> reduced_windows;
    for (const auto& w : windows) {
        if (w.is_1d()) {
            std::vector<IntervalSet> parts(kp);
            for (int l = 0; l < kp; ++l) {
                parts[l] = w.interval_part(l);
                for (int s = 1; s < order; ++s)
                    if (!(w.interval_part(l + s * kp) == parts[l]))
                        throw PreconditionError(
                            "window parts across a stabilizer orbit differ in endpoint flags; "
                            "cannot reduce without changing the generated set");
            }
            reduced_windows.push_back(Window::intervals(kp, std::move(parts)));
        } else {
            std::vector<ConvexPolygon> parts(kp);
            for (int l = 0; l < kp; ++l) parts[l] = w.polygon_part(l);
            reduced_windows.push_back(Window::polygons(kp, std::move(parts)));
        }
    }

    std::vector<Generator> gens = scheme.basis();
    for (auto& g : gens) g.label %= kp;
    CutProjectScheme reduced(scheme.field_d(), scheme.physical_dim(), scheme.internal_dim(), kp,
                             std::move(gens));
    auto residual = window_stabilizer(reduced_windows);
    if (residual.size() != 1)
        throw SchemeError("reduction left a nontrivial stabilizer");
    return {std::move(reduced), std::move(reduced_windows)};
}

}  // namespace modelset
