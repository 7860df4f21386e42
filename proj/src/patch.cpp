#include "modelset/patch.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "modelset/errors.hpp"

namespace modelset {

using ordered_json = nlohmann::ordered_json;

int compare_points(const PatchPoint& a, const PatchPoint& b, int n) {
    for (int i = 0; i < n; ++i) {
        int c = (a.pos[i] - b.pos[i]).sign();
        if (c != 0) return c;
    }
    return 0;
}

MultiSetPatch::MultiSetPatch(int n, Box region, std::vector<std::vector<PatchPoint>> colours)
    : n_(n), region_(std::move(region)), colours_(std::move(colours)) {
    for (auto& pts : colours_) {
        std::sort(pts.begin(), pts.end(),
                  [n](const PatchPoint& a, const PatchPoint& b) {
                      return compare_points(a, b, n) < 0;
                  });
        for (size_t i = 0; i + 1 < pts.size(); ++i)
            if (compare_points(pts[i], pts[i + 1], n_) == 0)
                throw PreconditionError("patch has duplicate points in one colour");
    }
}

size_t MultiSetPatch::total_points() const {
    size_t t = 0;
    for (const auto& c : colours_) t += c.size();
    return t;
}

std::optional<PatchPoint> MultiSetPatch::first_point() const {
    const PatchPoint* best = nullptr;
    for (const auto& c : colours_) {
        if (c.empty()) continue;
        if (!best || compare_points(c.front(), *best, n_) < 0) best = &c.front();
    }
    if (!best) return std::nullopt;
    return *best;
}

bool MultiSetPatch::point_in(int colour, const PatchPoint& p) const {
    const auto& pts = colours_.at(colour);
    auto it = std::lower_bound(pts.begin(), pts.end(), p,
                               [this](const PatchPoint& a, const PatchPoint& b) {
                                   return compare_points(a, b, n_) < 0;
                               });
    return it != pts.end() && compare_points(*it, p, n_) == 0;
}

MultiSetPatch MultiSetPatch::translate_restrict(const std::vector<QuadraticNumber>& t,
                                                const Box& new_region,
                                                const std::array<int64_t, 4>* t_coeffs) const {
    if (static_cast<int>(t.size()) != n_)
        throw PreconditionError("translation dimension mismatch");
    Box shifted_region = region_.translate(t);
    if (!shifted_region.contains_box(new_region))
        throw PreconditionError(
            "translate_restrict would leave the faithful region (would fabricate emptiness)");
    std::vector<std::vector<PatchPoint>> out(colours_.size());
    for (size_t c = 0; c < colours_.size(); ++c) {
        for (const auto& p : colours_[c]) {
            PatchPoint q = p;
            std::vector<QuadraticNumber> coords(n_);
            for (int i = 0; i < n_; ++i) {
                q.pos[i] = p.pos[i] + t[i];
                coords[i] = q.pos[i];
            }
            if (t_coeffs && p.has_coeffs()) {
                for (int i = 0; i < 4; ++i) q.coeffs[i] += (*t_coeffs)[i];
            } else {
                q.coeffs = {kNoCoeff, kNoCoeff, kNoCoeff, kNoCoeff};  // t need not be in L
            }
            if (new_region.contains(coords)) out[c].push_back(std::move(q));
        }
    }
    MultiSetPatch result(n_, new_region, std::move(out));
    result.scheme_hash = scheme_hash;
    result.window_hash = window_hash;
    result.policy = policy;
    result.translation = translation.empty() ? t : std::vector<QuadraticNumber>();
    if (!translation.empty()) {
        result.translation.resize(n_);
        for (int i = 0; i < n_; ++i) result.translation[i] = translation[i] + t[i];
    }
    return result;
}

bool MultiSetPatch::equal_on(const MultiSetPatch& other, const Box& box) const {
    if (other.colour_count() != colour_count() || other.n_ != n_) return false;
    for (int c = 0; c < colour_count(); ++c) {
        std::vector<const PatchPoint*> a, b;
        for (const auto& p : colours_[c]) {
            std::vector<QuadraticNumber> coords(p.pos.begin(), p.pos.begin() + n_);
            if (box.contains(coords)) a.push_back(&p);
        }
        for (const auto& p : other.colours_[c]) {
            std::vector<QuadraticNumber> coords(p.pos.begin(), p.pos.begin() + n_);
            if (box.contains(coords)) b.push_back(&p);
        }
        if (a.size() != b.size()) return false;
        for (size_t i = 0; i < a.size(); ++i)
            if (compare_points(*a[i], *b[i], n_) != 0) return false;
    }
    return true;
}

bool MultiSetPatch::operator==(const MultiSetPatch& other) const {
    if (other.colour_count() != colour_count() || other.n_ != n_) return false;
    for (int c = 0; c < colour_count(); ++c) {
        if (colours_[c].size() != other.colours_[c].size()) return false;
        for (size_t i = 0; i < colours_[c].size(); ++i)
            if (compare_points(colours_[c][i], other.colours_[c][i], n_) != 0) return false;
    }
    return true;
}

bool Cluster::operator==(const Cluster& other) const {
    if (offsets.size() != other.offsets.size()) return false;
    for (size_t c = 0; c < offsets.size(); ++c) {
        if (offsets[c].size() != other.offsets[c].size()) return false;
        for (size_t i = 0; i < offsets[c].size(); ++i)
            if (compare_points(offsets[c][i], other.offsets[c][i], 2) != 0) return false;
    }
    return true;
}

bool Cluster::operator<(const Cluster& other) const {
    if (offsets.size() != other.offsets.size()) return offsets.size() < other.offsets.size();
    for (size_t c = 0; c < offsets.size(); ++c) {
        if (offsets[c].size() != other.offsets[c].size())
            return offsets[c].size() < other.offsets[c].size();
        for (size_t i = 0; i < offsets[c].size(); ++i) {
            int cmp = compare_points(offsets[c][i], other.offsets[c][i], 2);
            if (cmp != 0) return cmp < 0;
        }
    }
    return false;
}

Cluster cluster_at(const MultiSetPatch& p, const PatchPoint& anchor, const Box& k_box) {
    int n = p.physical_dim();
    std::vector<QuadraticNumber> shift(n);
    for (int i = 0; i < n; ++i) shift[i] = anchor.pos[i];
    Box window = k_box.translate(shift);
    Cluster cl;
    cl.offsets.resize(p.colour_count());
    for (int c = 0; c < p.colour_count(); ++c) {
        const auto& pts = p.colour(c);
        // points are sorted lexicographically; narrow by the first coordinate
        auto first = std::lower_bound(pts.begin(), pts.end(), window.axis(0).lo,
                                      [](const PatchPoint& a, const QuadraticNumber& v) {
                                          return a.pos[0] < v;
                                      });
        for (auto it = first; it != pts.end() && it->pos[0] <= window.axis(0).hi; ++it) {
            std::vector<QuadraticNumber> coords(it->pos.begin(), it->pos.begin() + n);
            if (!window.contains(coords)) continue;
            PatchPoint off;
            for (int i = 0; i < n; ++i) off.pos[i] = it->pos[i] - anchor.pos[i];
            cl.offsets[c].push_back(std::move(off));
        }
    }
    return cl;
}

std::optional<std::vector<QuadraticNumber>> local_match(const MultiSetPatch& p1,
                                                        const MultiSetPatch& p2, const Box& k_box,
                                                        double v_radius) {
    int n = p1.physical_dim();
    if (p2.physical_dim() != n || p2.colour_count() != p1.colour_count())
        throw PreconditionError("patches are not comparable");
    Box fat = k_box.inflate(v_radius);
    if (!p1.faithful_on(fat) || !p2.faithful_on(fat))
        throw PreconditionError("patches are not faithful on K fattened by V");

    Rational v2 = Rational(v_radius) * Rational(v_radius);
    auto within_v = [&](const std::vector<QuadraticNumber>& s) {
        QuadraticNumber norm2(0);
        for (const auto& c : s) norm2 += c * c;
        return norm2 <= QuadraticNumber(v2);
    };
    auto matches = [&](const std::vector<QuadraticNumber>& s) {
        MultiSetPatch shifted = p1.translate_restrict(s, k_box.intersect(p1.region().translate(s)));
        // compare (s + p1) ∩ K with p2 ∩ K
        return shifted.equal_on(p2, k_box);
    };

    std::vector<QuadraticNumber> zero(n, QuadraticNumber(0));
    if (within_v(zero) && matches(zero)) return zero;

    // candidate shifts: differences y - x for same-colour x in p1, y in p2, |y-x| <= V
    for (int c = 0; c < p1.colour_count(); ++c) {
        for (const auto& x : p1.colour(c)) {
            std::vector<QuadraticNumber> xc(x.pos.begin(), x.pos.begin() + n);
            if (!fat.contains(xc, BoundaryPolicy::Closure)) continue;
            for (const auto& y : p2.colour(c)) {
                std::vector<QuadraticNumber> s(n);
                for (int i = 0; i < n; ++i) s[i] = y.pos[i] - x.pos[i];
                bool zero_shift = true;
                for (const auto& si : s)
                    if (!si.is_zero()) zero_shift = false;
                if (zero_shift) continue;
                if (!within_v(s)) continue;
                if (matches(s)) return s;
            }
        }
    }
    return std::nullopt;
}

namespace {

std::string quad_pair_to_csv(const QuadraticNumber& q) {
    return rational_to_string(q.rational_part()) + "," + rational_to_string(q.radical_part());
}

}  // namespace

void save_patch_csv(const MultiSetPatch& p, const std::string& csv_path,
                    const std::string& sidecar_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw ConfigError("cannot open " + csv_path + " for writing");
    int n = p.physical_dim();
    if (n == 1)
        csv << "colour,x,exact_a,exact_b\n";
    else
        csv << "colour,x,y,exact_ax,exact_bx,exact_ay,exact_by\n";
    csv.precision(17);
    for (int c = 0; c < p.colour_count(); ++c) {
        for (const auto& pt : p.colour(c)) {
            csv << c;
            for (int i = 0; i < n; ++i) csv << "," << pt.pos[i].to_double();
            for (int i = 0; i < n; ++i) csv << "," << quad_pair_to_csv(pt.pos[i]);
            csv << "\n";
        }
    }

    ordered_json side;
    side["format_version"] = 1;
    side["n"] = n;
    side["colour_count"] = p.colour_count();
    int field_d = 0;
    for (int c = 0; c < p.colour_count() && field_d == 0; ++c)
        for (const auto& pt : p.colour(c)) {
            for (int i = 0; i < n; ++i)
                if (pt.pos[i].field_d() != 0) field_d = pt.pos[i].field_d();
            if (field_d != 0) break;
        }
    side["D"] = field_d;
    ordered_json region;
    ordered_json lo = ordered_json::array(), hi = ordered_json::array();
    ordered_json lo_closed = ordered_json::array(), hi_closed = ordered_json::array();
    for (const auto& a : p.region().axes()) {
        lo.push_back(a.lo.to_double());
        hi.push_back(a.hi.to_double());
        lo_closed.push_back(a.lo_closed);
        hi_closed.push_back(a.hi_closed);
    }
    region["lo"] = lo;
    region["hi"] = hi;
    region["lo_closed"] = lo_closed;
    region["hi_closed"] = hi_closed;
    side["region"] = region;
    side["scheme_hash"] = p.scheme_hash;
    side["window_hash"] = p.window_hash;
    side["policy"] = p.policy;
    std::ofstream sc(sidecar_path);
    if (!sc) throw ConfigError("cannot open " + sidecar_path + " for writing");
    sc << side.dump(2) << "\n";
}

MultiSetPatch load_patch_csv(const std::string& csv_path, const std::string& sidecar_path) {
    std::ifstream sc(sidecar_path);
    if (!sc) throw ConfigError("cannot open sidecar " + sidecar_path);
    ordered_json side;
    try {
        sc >> side;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad sidecar JSON: ") + e.what());
    }
    int n = side.at("n").get<int>();
    int m = side.at("colour_count").get<int>();
    int field_d = side.value("D", 0);
    std::vector<Interval> axes;
    const auto& region = side.at("region");
    for (size_t i = 0; i < region.at("lo").size(); ++i) {
        Interval a{QuadraticNumber(Rational(region.at("lo")[i].get<double>())),
                   QuadraticNumber(Rational(region.at("hi")[i].get<double>())),
                   region.at("lo_closed")[i].get<bool>(), region.at("hi_closed")[i].get<bool>()};
        axes.push_back(std::move(a));
    }

    std::ifstream csv(csv_path);
    if (!csv) throw ConfigError("cannot open " + csv_path);
    std::string line;
    std::getline(csv, line);  // header
    std::vector<std::vector<PatchPoint>> colours(m);
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        size_t expected = 1 + static_cast<size_t>(n) + 2 * static_cast<size_t>(n);
        if (fields.size() != expected) throw ConfigError("bad CSV row: " + line);
        int colour = std::stoi(fields[0]);
        if (colour < 0 || colour >= m) throw ConfigError("CSV colour out of range");
        PatchPoint pt;
        for (int i = 0; i < n; ++i) {
            auto a = parse_rational(fields[1 + n + 2 * i]);
            auto b = parse_rational(fields[1 + n + 2 * i + 1]);
            if (!a || !b) throw ConfigError("bad exact coordinate in CSV");
            pt.pos[i] = QuadraticNumber(*a, *b, *b == 0 ? 0 : field_d);
        }
        colours[colour].push_back(std::move(pt));
    }
    MultiSetPatch p(n, Box(std::move(axes)), std::move(colours));
    p.scheme_hash = side.value("scheme_hash", "");
    p.window_hash = side.value("window_hash", "");
    p.policy = side.value("policy", "");
    return p;
}

}  // namespace modelset
