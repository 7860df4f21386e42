// Command-line surface: scheme configs in, JSON reports and patch CSVs out.
// Exit codes: 0 ok, 2 config error, 3 scheme invariant violation,
// 4 precondition/faithfulness violation, 5 inconsistent patch.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <span>

#include "modelset/analysis.hpp"
#include "modelset/autocorr.hpp"
#include "modelset/errors.hpp"
#include "modelset/presets.hpp"
#include "modelset/report.hpp"
#include "modelset/torus.hpp"

using namespace modelset;
using ordered_json = nlohmann::ordered_json;

namespace {

struct GlobalOpts {
    std::string scheme;
    double radius = 100.0;
    std::string out = "-";
    uint64_t seed = 0;
    double tol = 1e-6;
};

SchemeConfig load_scheme(const std::string& spec) {
    if (spec.empty()) throw ConfigError("missing --scheme");
    std::ifstream probe(spec);
    if (probe.good()) return load_scheme_config(spec);
    // allow bare preset names as a convenience
    for (const char* name : {"fibonacci", "silver-mean", "ammann-beenker", "redundant-k2"})
        if (spec == name) return preset_by_name(spec);
    throw ConfigError("cannot open scheme config " + spec);
}

ordered_json envelope(const GlobalOpts& g, const SchemeConfig& cfg, const std::string& sub) {
    ordered_json j;
    j["tool"] = "modelset";
    j["version"] = kToolVersion;
    j["subcommand"] = sub;
    j["seed"] = g.seed;
    j["scheme"] = cfg.name;
    j["scheme_hash"] = cfg.scheme.hash();
    j["window_hash"] = windows_hash(cfg.windows);
    return j;
}

void emit(const GlobalOpts& g, const ordered_json& report) {
    std::string text = report.dump(2) + "\n";
    if (g.out == "-" || g.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(g.out);
        if (!out) throw ConfigError("cannot open " + g.out + " for writing");
        out << text;
    }
}

std::string sidecar_path_for(const std::string& csv) {
    auto dot = csv.find_last_of('.');
    std::string base = dot == std::string::npos ? csv : csv.substr(0, dot);
    return base + ".meta.json";
}

std::array<int64_t, 4> parse_coeffs(const std::string& text, int rank) {
    std::array<int64_t, 4> out{0, 0, 0, 0};
    std::stringstream ss(text);
    std::string field;
    int i = 0;
    while (std::getline(ss, field, ',')) {
        if (i >= rank) throw ConfigError("too many lattice coefficients in '" + text + "'");
        try {
            out[i++] = std::stoll(field);
        } catch (const std::exception&) {
            throw ConfigError("bad lattice coefficient '" + field + "'");
        }
    }
    if (i != rank)
        throw ConfigError("expected " + std::to_string(rank) + " lattice coefficients");
    return out;
}

ordered_json point_json(const CutProjectScheme& scheme, const PatchPoint& p) {
    ordered_json j;
    ordered_json pos = ordered_json::array();
    ordered_json exact = ordered_json::array();
    for (int i = 0; i < scheme.physical_dim(); ++i) {
        pos.push_back(p.pos[i].to_double());
        exact.push_back(p.pos[i].to_string());
    }
    j["position"] = pos;
    j["exact"] = exact;
    if (p.has_coeffs()) {
        ordered_json c = ordered_json::array();
        for (int i = 0; i < scheme.rank(); ++i) c.push_back(p.coeffs[i]);
        j["coeffs"] = c;
    }
    return j;
}

// --- subcommands ----------------------------------------------------------

int run_generate(const GlobalOpts& g, const std::string& policy_str,
                 const std::string& patch_out) {
    SchemeConfig cfg = load_scheme(g.scheme);
    BoundaryPolicy policy = policy_from_name(policy_str);
    if (g.radius <= 0) throw ConfigError("radius must be positive");
    Box region = Box::cube(cfg.scheme.physical_dim(), g.radius);
    MultiSetPatch patch = cfg.scheme.enumerate_model_set(cfg.windows, region, policy);

    std::string csv = patch_out + ".csv";
    std::string side = sidecar_path_for(csv);
    save_patch_csv(patch, csv, side);

    ordered_json rep = envelope(g, cfg, "generate");
    rep["radius"] = g.radius;
    rep["policy"] = policy_str;
    ordered_json counts = ordered_json::array(), densities = ordered_json::array();
    double vol = region.volume().to_double();
    for (int c = 0; c < patch.colour_count(); ++c) {
        counts.push_back(patch.colour(c).size());
        densities.push_back(static_cast<double>(patch.colour(c).size()) / vol);
    }
    rep["counts"] = counts;
    rep["densities"] = densities;
    if (cfg.scheme.physical_dim() == 1) {
        ordered_json hists = ordered_json::array();
        for (int c = 0; c < patch.colour_count(); ++c) {
            std::map<double, size_t> hist;
            const auto& pts = patch.colour(c);
            for (size_t i = 0; i + 1 < pts.size(); ++i)
                hist[(pts[i + 1].pos[0] - pts[i].pos[0]).to_double()] += 1;
            ordered_json h = ordered_json::array();
            for (const auto& [gap, n] : hist) h.push_back(ordered_json::array({gap, n}));
            hists.push_back(h);
        }
        rep["gap_histograms"] = hists;
    }
    rep["patch_csv"] = csv;
    rep["patch_sidecar"] = side;
    emit(g, rep);
    return 0;
}

int run_analyze(const GlobalOpts& g, std::vector<double> k_radii, int schedule_steps) {
    SchemeConfig cfg = load_scheme(g.scheme);
    if (g.radius <= 0) throw ConfigError("radius must be positive");
    int n = cfg.scheme.physical_dim();
    MultiSetPatch patch =
        cfg.scheme.enumerate_model_set(cfg.windows, Box::cube(n, g.radius), BoundaryPolicy::Flags);
    AveragingSequence seq = AveragingSequence::geometric_to(n, g.radius, schedule_steps);
    if (k_radii.empty()) {
        auto delone = delone_radii(patch);
        double r_cov = delone[0].covering;
        k_radii = {r_cov, 2 * r_cov, 4 * r_cov};
    }
    ordered_json rep = envelope(g, cfg, "analyze");
    rep["radius"] = g.radius;
    rep["k_radii"] = k_radii;
    ordered_json payload = analyze_report(cfg, patch, seq, k_radii);
    for (auto& [key, value] : payload.items()) rep[key] = value;
    emit(g, rep);
    return 0;
}

int run_autocorr(const GlobalOpts& g, const std::string& t_str, const std::string& mode,
                 double epsilon) {
    SchemeConfig cfg = load_scheme(g.scheme);
    ordered_json rep = envelope(g, cfg, "autocorr");
    rep["mode"] = mode;
    int n = cfg.scheme.physical_dim();

    if (!t_str.empty()) {
        auto t = parse_coeffs(t_str, cfg.scheme.rank());
        ordered_json tj = ordered_json::array();
        for (int i = 0; i < cfg.scheme.rank(); ++i) tj.push_back(t[i]);
        rep["t"] = tj;
        InternalPoint phi =
            cfg.scheme.star_map(std::span<const int64_t>(t.data(), cfg.scheme.rank()));
        double phi_norm = 0;
        for (const auto& r : phi.real) phi_norm += r.to_double() * r.to_double();
        rep["phi_norm"] = std::sqrt(phi_norm);
        double ana =
            d_analytic(cfg.scheme, cfg.windows, std::span<const int64_t>(t.data(), cfg.scheme.rank()));
        if (mode == "analytic" || mode == "both") rep["analytic"] = ana;
        if (mode == "empirical" || mode == "both") {
            if (g.radius <= 0) throw ConfigError("radius must be positive");
            auto tphys = cfg.scheme.physical_of(std::span<const int64_t>(t.data(), cfg.scheme.rank()));
            double margin = 0;
            for (const auto& x : tphys) margin = std::max(margin, std::abs(x.to_double()));
            MultiSetPatch base = cfg.scheme.enumerate_model_set(
                cfg.windows, Box::cube(n, g.radius + margin + 1), BoundaryPolicy::Flags);
            Box inner = Box::cube(n, g.radius);
            MultiSetPatch translated = base.translate_restrict(tphys, inner, &t);
            MultiSetPatch restricted =
                base.translate_restrict(std::vector<QuadraticNumber>(n, QuadraticNumber(0)), inner);
            AveragingSequence seq = AveragingSequence::geometric_to(n, g.radius, 5);
            auto emp = d_empirical(restricted, translated, seq);
            ordered_json ej;
            ej["partials"] = emp.partials;
            ej["value"] = emp.value;
            ej["converged"] = emp.converged;
            rep["empirical"] = ej;
            if (mode == "both") rep["agreement"] = std::abs(emp.value - ana);
        }
        rep["d_sup"] = d_sup(cfg.scheme, cfg.windows);
    }

    if (epsilon > 0) {
        Box region = Box::cube(n, g.radius);
        auto pe = p_epsilon(cfg.scheme, cfg.windows, epsilon, region);
        ordered_json pj;
        pj["epsilon"] = epsilon;
        pj["all_of_g"] = pe.all_of_g;
        pj["count"] = pe.points.size();
        pj["max_gap"] = pe.max_gap;
        if (pe.ball_radius) pj["ball_radius"] = *pe.ball_radius;
        pj["identity_checked"] = pe.identity_checked;
        pj["identity_holds"] = pe.identity_holds;
        rep["p_epsilon"] = pj;
    }
    emit(g, rep);
    return 0;
}

int run_torus(const GlobalOpts& g, const std::string& input, const std::string& action,
              const std::string& c_str, double m_radius, int samples) {
    SchemeConfig cfg = load_scheme(g.scheme);
    ordered_json rep = envelope(g, cfg, "torus");
    rep["action"] = action;
    int n = cfg.scheme.physical_dim();

    auto load_patch = [&]() {
        if (input.empty()) throw ConfigError("torus action '" + action + "' needs --input");
        return load_patch_csv(input, sidecar_path_for(input));
    };

    auto cert_json = [&](const CGammaCertificate& cert) {
        ordered_json cj;
        ordered_json creal = ordered_json::array();
        for (const auto& r : cert.c.real) creal.push_back(r.to_double());
        cj["c"] = creal;
        cj["label"] = cert.label;
        cj["diameter"] = cert.diameter;
        cj["points_used"] = cert.points_used;
        cj["reached_tol"] = cert.reached_tol;
        if (cert.exact_lo) {
            cj["exact_lo"] = cert.exact_lo->to_string();
            cj["exact_hi"] = cert.exact_hi->to_string();
        }
        ordered_json stages = ordered_json::array();
        for (const auto& s : cert.stages)
            stages.push_back(ordered_json::array({s.radius, s.diameter}));
        cj["stages"] = stages;
        return cj;
    };

    if (action == "c") {
        auto cert = c_gamma(load_patch(), cfg.scheme, cfg.windows, g.tol);
        rep["certificate"] = cert_json(cert);
    } else if (action == "gamma") {
        auto res = gamma_map(load_patch(), cfg.scheme, cfg.windows, g.tol);
        ordered_json gj;
        ordered_json frac = ordered_json::array(), frac_exact = ordered_json::array();
        for (const auto& f : res.point.frac_coeffs()) {
            frac.push_back(f.to_double());
            frac_exact.push_back(f.to_string());
        }
        gj["frac_coeffs"] = frac;
        gj["frac_coeffs_exact"] = frac_exact;
        gj["label"] = res.point.label();
        ordered_json align = ordered_json::array();
        for (const auto& a : res.alignment) align.push_back(a.to_double());
        gj["alignment"] = align;
        gj["well_defined_checked"] = res.well_defined_checked;
        rep["gamma"] = gj;
        rep["certificate"] = cert_json(res.certificate);
    } else if (action == "reconstruct") {
        auto rec = reconstruct_window(load_patch(), cfg.scheme, cfg.windows, g.tol);
        ordered_json arr = ordered_json::array();
        for (const auto& r : rec) {
            ordered_json rj;
            if (r.hull_1d) {
                rj["lo"] = r.hull_1d->lo.to_double();
                rj["hi"] = r.hull_1d->hi.to_double();
            }
            rj["hausdorff_gap"] = r.hausdorff_gap;
            rj["points"] = r.points;
            ordered_json hist = ordered_json::array();
            for (const auto& [gap, count] : r.gap_histogram)
                hist.push_back(ordered_json::array({gap, count}));
            rj["gap_histogram"] = hist;
            arr.push_back(rj);
        }
        rep["reconstruction"] = arr;
    } else if (action == "singular") {
        Box region = Box::cube(n, g.radius);
        if (samples > 0) {
            // T_g sampling: uniformly sampled internal parameters
            std::mt19937_64 rng(g.seed);
            std::uniform_real_distribution<double> uni(0.0, 1.0);
            int hits = 0;
            for (int i = 0; i < samples; ++i) {
                InternalPoint c;
                for (int a = 0; a < cfg.scheme.internal_dim(); ++a)
                    c.real.push_back(QuadraticNumber(Rational(uni(rng))));
                c.label = 0;
                if (singularity_test(c, cfg.scheme, cfg.windows, region).singular) ++hits;
            }
            rep["samples"] = samples;
            rep["singular_hits"] = hits;
        } else {
            SingularityResult res;
            if (!c_str.empty()) {
                auto parsed = parse_rational(c_str);
                if (!parsed) throw ConfigError("bad --c value");
                InternalPoint c{{QuadraticNumber(*parsed)}, 0};
                res = singularity_test(c, cfg.scheme, cfg.windows, region);
            } else {
                res = singularity_test(load_patch(), cfg.scheme, cfg.windows, region, g.tol);
            }
            rep["singular"] = res.singular;
            rep["exhaustive"] = res.exhaustive;
            if (res.witness) {
                rep["witness"] = point_json(cfg.scheme, *res.witness);
                rep["witness_colour"] = res.witness_colour;
            }
        }
    } else if (action == "rigidity") {
        MultiSetPatch p = input.empty()
                              ? cfg.scheme.enumerate_model_set(
                                    cfg.windows, Box::cube(n, g.radius), BoundaryPolicy::Flags)
                              : load_patch();
        Box probe = Box::cube(n, std::min(g.radius / 3, 100.0));
        auto res = local_rigidity_radius(p, cfg.scheme, cfg.windows, m_radius, probe);
        rep["m_radius"] = m_radius;
        rep["epsilon"] = res.epsilon;
        rep["grid_index"] = res.grid_index;
        rep["positive"] = res.positive;
        rep["probes"] = res.probes;
    } else {
        throw ConfigError("unknown torus action '" + action + "'");
    }
    emit(g, rep);
    return 0;
}

int run_reduce(const GlobalOpts& g, const std::string& out_scheme) {
    SchemeConfig cfg = load_scheme(g.scheme);
    auto stab = window_stabilizer(cfg.windows);
    auto [reduced, rwindows] = irredundant_reduction(cfg.scheme, cfg.windows);

    // verify on a region that the generated point sets agree exactly
    Box region = Box::closed({0.0}, {100.0});
    if (cfg.scheme.physical_dim() == 2) region = Box::cube(2, 10.0);
    auto before = cfg.scheme.enumerate_model_set(cfg.windows, region, BoundaryPolicy::Flags);
    auto after = reduced.enumerate_model_set(rwindows, region, BoundaryPolicy::Flags);
    bool equal = before == after;

    ordered_json rep = envelope(g, cfg, "reduce");
    rep["stabilizer"] = stab;
    rep["k_before"] = cfg.scheme.cyclic_order();
    rep["k_after"] = reduced.cyclic_order();
    rep["point_sets_equal"] = equal;
    rep["reduced_stabilizer"] = window_stabilizer(rwindows);
    SchemeConfig out{cfg.name.empty() ? "" : cfg.name + "-reduced", reduced, rwindows};
    rep["reduced_scheme_hash"] = reduced.hash();
    if (!out_scheme.empty()) {
        std::ofstream f(out_scheme);
        if (!f) throw ConfigError("cannot open " + out_scheme + " for writing");
        f << scheme_config_to_json(out).dump(2) << "\n";
        rep["reduced_scheme_path"] = out_scheme;
    } else {
        rep["reduced_scheme"] = scheme_config_to_json(out);
    }
    emit(g, rep);
    return 0;
}

int run_probe(const GlobalOpts& g, const std::vector<std::string>& t_strs) {
    SchemeConfig cfg = load_scheme(g.scheme);
    std::vector<std::array<int64_t, 4>> ts;
    for (const auto& s : t_strs) ts.push_back(parse_coeffs(s, cfg.scheme.rank()));
    if (ts.empty()) {
        // default sequence: per dyadic physical shell, the lattice point with
        // the smallest nonzero star image inside the difference-window hull
        Window diff = cfg.windows.at(0).difference();
        for (double r = 4; r <= std::max(16.0, g.radius); r *= 2) {
            CutProjectScheme::EnumerationQuery q;
            q.physical = Box::cube(cfg.scheme.physical_dim(), r);
            q.window = &diff;
            q.policy = BoundaryPolicy::Closure;
            std::array<int64_t, 4> best{0, 0, 0, 0};
            double best_norm = 1e300;
            cfg.scheme.for_each_lattice_point(q, [&](const std::array<int64_t, 4>& c) {
                bool zero = true;
                for (int i = 0; i < cfg.scheme.rank(); ++i)
                    if (c[i] != 0) zero = false;
                if (zero) return;
                InternalPoint phi =
                    cfg.scheme.star_map(std::span<const int64_t>(c.data(), cfg.scheme.rank()));
                double norm = 0;
                for (const auto& x : phi.real) norm += x.to_double() * x.to_double();
                if (norm < best_norm) {
                    best_norm = norm;
                    best = c;
                }
            });
            if (best_norm < 1e299 && (ts.empty() || ts.back() != best)) ts.push_back(best);
        }
    }
    auto report = topology_probe(cfg.scheme, cfg.windows, ts);
    ordered_json rep = envelope(g, cfg, "probe");
    ordered_json entries = ordered_json::array();
    for (const auto& e : report.entries) {
        ordered_json ej;
        ordered_json tj = ordered_json::array();
        for (int i = 0; i < cfg.scheme.rank(); ++i) tj.push_back(e.t[i]);
        ej["t"] = tj;
        ej["phi_norm"] = e.phi_norm;
        ej["d"] = e.d_value;
        entries.push_back(ej);
    }
    rep["entries"] = entries;
    rep["co_monotone"] = report.co_monotone;
    rep["modulus_bound_holds"] = report.modulus_bound_holds;
    if (report.redundancy_witness_label)
        rep["redundancy_witness_label"] = *report.redundancy_witness_label;
    emit(g, rep);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cut-and-project model multi-sets: generation, analysis, autocorrelation "
                 "and torus parametrization"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--scheme", g.scheme, "scheme config JSON (or a built-in preset name)");
    app.add_option("--radius", g.radius, "physical region radius");
    app.add_option("--out", g.out, "report path ('-' for stdout)");
    app.add_option("--seed", g.seed, "seed for sampling operations");
    app.add_option("--tol", g.tol, "tolerance for enclosure certificates");

    auto* gen = app.add_subcommand("generate", "enumerate a model-set patch to CSV");
    std::string policy = "half-open";
    std::string patch_out = "patch";
    gen->add_option("--policy", policy, "interior | closure | half-open");
    gen->add_option("--patch-out", patch_out, "output basename for CSV and sidecar");

    auto* ana = app.add_subcommand("analyze", "Delone/FLC/repetitivity/Meyer/density report");
    std::vector<double> k_radii;
    int schedule_steps = 5;
    ana->add_option("--k", k_radii, "cluster box radii (default: covering-radius multiples)");
    ana->add_option("--schedule", schedule_steps, "number of averaging boxes");

    auto* acc = app.add_subcommand("autocorr", "autocorrelation distance and almost-periods");
    std::string t_str, mode = "both";
    double epsilon = 0;
    acc->add_option("--t", t_str, "lattice coefficients a,b[,c,d]");
    acc->add_option("--mode", mode, "empirical | analytic | both");
    acc->add_option("--epsilon", epsilon, "also report P_epsilon at this epsilon");

    auto* tor = app.add_subcommand("torus", "torus parametrization operations");
    std::string input, action = "c", c_str;
    double m_radius = 10.0;
    int samples = 0;
    tor->add_option("--input", input, "patch CSV (sidecar <base>.meta.json alongside)");
    tor->add_option("--action", action, "c | gamma | reconstruct | singular | rigidity");
    tor->add_option("--c", c_str, "internal parameter (rational) for --action singular");
    tor->add_option("--m-radius", m_radius, "A_M radius for --action rigidity");
    tor->add_option("--samples", samples, "Monte Carlo sample count for --action singular");

    auto* red = app.add_subcommand("reduce", "irredundancy reduction H' = H/I");
    std::string out_scheme;
    red->add_option("--out-scheme", out_scheme, "write the reduced scheme config here");

    auto* prb = app.add_subcommand("probe", "two-topology equivalence probe");
    std::vector<std::string> t_strs;
    prb->add_option("--t", t_strs, "lattice coefficient tuples a,b[,c,d] (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) return run_generate(g, policy, patch_out);
        if (ana->parsed()) return run_analyze(g, k_radii, schedule_steps);
        if (acc->parsed()) return run_autocorr(g, t_str, mode, epsilon);
        if (tor->parsed()) return run_torus(g, input, action, c_str, m_radius, samples);
        if (red->parsed()) return run_reduce(g, out_scheme);
        if (prb->parsed()) return run_probe(g, t_strs);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SchemeError& e) {
        std::cerr << "scheme invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const InconsistentPatchError& e) {
        std::cerr << "inconsistent patch: " << e.what() << "\n";
        return 5;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
