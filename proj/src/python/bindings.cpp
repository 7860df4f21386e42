// Python bindings: thin wrappers over the core operations. Structured results
// cross the boundary as JSON text; the package decodes them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "modelset/analysis.hpp"
#include "modelset/autocorr.hpp"
#include "modelset/errors.hpp"
#include "modelset/presets.hpp"
#include "modelset/report.hpp"
#include "modelset/torus.hpp"

namespace py = pybind11;
using namespace modelset;
using ordered_json = nlohmann::ordered_json;

namespace {

std::array<int64_t, 4> coeffs_from(const SchemeConfig& cfg, const std::vector<int64_t>& t) {
    if (static_cast<int>(t.size()) != cfg.scheme.rank())
        throw PreconditionError("expected " + std::to_string(cfg.scheme.rank()) +
                                " lattice coefficients");
    std::array<int64_t, 4> out{0, 0, 0, 0};
    for (size_t i = 0; i < t.size(); ++i) out[i] = t[i];
    return out;
}

MultiSetPatch generate_patch(const SchemeConfig& cfg, double radius, const std::string& policy) {
    return cfg.scheme.enumerate_model_set(
        cfg.windows, Box::cube(cfg.scheme.physical_dim(), radius), policy_from_name(policy));
}

py::list patch_points(const SchemeConfig& cfg, const MultiSetPatch& patch) {
    py::list out;
    for (int c = 0; c < patch.colour_count(); ++c) {
        for (const auto& p : patch.colour(c)) {
            py::dict d;
            d["colour"] = c;
            py::list pos, exact;
            for (int i = 0; i < cfg.scheme.physical_dim(); ++i) {
                pos.append(p.pos[i].to_double());
                exact.append(p.pos[i].to_string());
            }
            d["position"] = pos;
            d["exact"] = exact;
            if (p.has_coeffs()) {
                py::list cs;
                for (int i = 0; i < cfg.scheme.rank(); ++i) cs.append(p.coeffs[i]);
                d["coeffs"] = cs;
            }
            out.append(d);
        }
    }
    return out;
}

std::string cert_to_json(const CGammaCertificate& cert) {
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
        cj["lo"] = cert.exact_lo->to_double();
        cj["hi"] = cert.exact_hi->to_double();
    }
    ordered_json stages = ordered_json::array();
    for (const auto& s : cert.stages) stages.push_back(ordered_json::array({s.radius, s.diameter}));
    cj["stages"] = stages;
    return cj.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "cut-and-project model multi-sets: exact enumeration, autocorrelation "
              "pseudo-metric and torus parametrization";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<SchemeError>(m, "SchemeError");
    py::register_exception<PreconditionError>(m, "PreconditionError");
    py::register_exception<InconsistentPatchError>(m, "InconsistentPatchError");

    py::class_<SchemeConfig>(m, "Scheme")
        .def_property_readonly("name", [](const SchemeConfig& c) { return c.name; })
        .def_property_readonly("n", [](const SchemeConfig& c) { return c.scheme.physical_dim(); })
        .def_property_readonly("d", [](const SchemeConfig& c) { return c.scheme.internal_dim(); })
        .def_property_readonly("k", [](const SchemeConfig& c) { return c.scheme.cyclic_order(); })
        .def_property_readonly("field_d", [](const SchemeConfig& c) { return c.scheme.field_d(); })
        .def_property_readonly("rank", [](const SchemeConfig& c) { return c.scheme.rank(); })
        .def_property_readonly("covolume", [](const SchemeConfig& c) { return c.scheme.covolume(); })
        .def_property_readonly("colour_count",
                               [](const SchemeConfig& c) { return c.windows.size(); })
        .def_property_readonly("scheme_hash", [](const SchemeConfig& c) { return c.scheme.hash(); })
        .def_property_readonly("window_hash",
                               [](const SchemeConfig& c) { return windows_hash(c.windows); })
        .def("__repr__", [](const SchemeConfig& c) {
            std::ostringstream os;
            os << "<Scheme " << (c.name.empty() ? "unnamed" : c.name) << " n=" <<
                c.scheme.physical_dim() << " d=" << c.scheme.internal_dim() << " k="
               << c.scheme.cyclic_order() << ">";
            return os.str();
        });

    m.attr("__version__") = kToolVersion;
    m.def("preset_names", [] {
        return std::vector<std::string>{"fibonacci", "silver-mean", "ammann-beenker",
                                        "redundant-k2"};
    });
    m.def("preset", &preset_by_name, py::arg("name"));
    m.def("load_scheme_json", [](const std::string& text) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad scheme JSON: ") + e.what());
        }
        return scheme_config_from_json(j);
    });
    m.def("scheme_to_json",
          [](const SchemeConfig& cfg) { return scheme_config_to_json(cfg).dump(2); });

    m.def(
        "star_map",
        [](const SchemeConfig& cfg, const std::vector<int64_t>& t) {
            auto c = coeffs_from(cfg, t);
            InternalPoint ip = cfg.scheme.star_map(std::span<const int64_t>(c.data(),
                                                                            cfg.scheme.rank()));
            std::vector<double> real;
            std::vector<std::string> exact;
            for (const auto& r : ip.real) {
                real.push_back(r.to_double());
                exact.push_back(r.to_string());
            }
            return py::make_tuple(real, exact, ip.label);
        },
        py::arg("scheme"), py::arg("coeffs"));

    m.def(
        "generate",
        [](const SchemeConfig& cfg, double radius, const std::string& policy) {
            return patch_points(cfg, generate_patch(cfg, radius, policy));
        },
        py::arg("scheme"), py::arg("radius"), py::arg("policy") = "half-open");

    m.def(
        "d_analytic",
        [](const SchemeConfig& cfg, const std::vector<int64_t>& t) {
            auto c = coeffs_from(cfg, t);
            return d_analytic(cfg.scheme, cfg.windows,
                              std::span<const int64_t>(c.data(), cfg.scheme.rank()));
        },
        py::arg("scheme"), py::arg("t"));

    m.def(
        "d_empirical_json",
        [](const SchemeConfig& cfg, const std::vector<int64_t>& t, double radius) {
            auto c = coeffs_from(cfg, t);
            auto tphys =
                cfg.scheme.physical_of(std::span<const int64_t>(c.data(), cfg.scheme.rank()));
            double margin = 0;
            for (const auto& x : tphys) margin = std::max(margin, std::abs(x.to_double()));
            int n = cfg.scheme.physical_dim();
            auto base = cfg.scheme.enumerate_model_set(
                cfg.windows, Box::cube(n, radius + margin + 1), BoundaryPolicy::Flags);
            auto translated = base.translate_restrict(tphys, Box::cube(n, radius), &c);
            auto restricted = base.translate_restrict(
                std::vector<QuadraticNumber>(n, QuadraticNumber(0)), Box::cube(n, radius));
            auto emp =
                d_empirical(restricted, translated, AveragingSequence::geometric_to(n, radius, 5));
            ordered_json j;
            j["partials"] = emp.partials;
            j["value"] = emp.value;
            j["converged"] = emp.converged;
            return j.dump();
        },
        py::arg("scheme"), py::arg("t"), py::arg("radius"));

    m.def(
        "p_epsilon_json",
        [](const SchemeConfig& cfg, double eps, double radius) {
            auto res = p_epsilon(cfg.scheme, cfg.windows, eps,
                                 Box::cube(cfg.scheme.physical_dim(), radius));
            ordered_json j;
            j["all_of_g"] = res.all_of_g;
            j["count"] = res.points.size();
            j["max_gap"] = res.max_gap;
            if (res.ball_radius) j["ball_radius"] = *res.ball_radius;
            j["identity_checked"] = res.identity_checked;
            j["identity_holds"] = res.identity_holds;
            return j.dump();
        },
        py::arg("scheme"), py::arg("epsilon"), py::arg("radius"));

    m.def(
        "c_gamma_json",
        [](const SchemeConfig& cfg, double radius, double tol) {
            auto patch = generate_patch(cfg, radius, "half-open");
            return cert_to_json(c_gamma(patch, cfg.scheme, cfg.windows, tol));
        },
        py::arg("scheme"), py::arg("radius"), py::arg("tol") = 1e-6);

    m.def(
        "c_gamma_streamed_json",
        [](const SchemeConfig& cfg, double tol, double max_radius) {
            return cert_to_json(c_gamma_streamed(cfg.scheme, cfg.windows, tol, max_radius));
        },
        py::arg("scheme"), py::arg("tol") = 1e-6, py::arg("max_radius") = 3.0e7);

    m.def(
        "reconstruct_json",
        [](const SchemeConfig& cfg, double radius, double tol) {
            auto patch = generate_patch(cfg, radius, "half-open");
            auto rec = reconstruct_window(patch, cfg.scheme, cfg.windows, tol);
            ordered_json arr = ordered_json::array();
            for (const auto& r : rec) {
                ordered_json rj;
                if (r.hull_1d) {
                    rj["lo"] = r.hull_1d->lo.to_double();
                    rj["hi"] = r.hull_1d->hi.to_double();
                }
                rj["hausdorff_gap"] = r.hausdorff_gap;
                rj["points"] = r.points;
                arr.push_back(rj);
            }
            return arr.dump();
        },
        py::arg("scheme"), py::arg("radius"), py::arg("tol") = 1e-9);

    m.def(
        "singularity_json",
        [](const SchemeConfig& cfg, const std::string& c_value, double radius) {
            auto parsed = parse_rational(c_value);
            if (!parsed) throw ConfigError("bad rational '" + c_value + "'");
            InternalPoint c;
            c.real.assign(cfg.scheme.internal_dim(), QuadraticNumber(*parsed));
            c.label = 0;
            auto res = singularity_test(c, cfg.scheme, cfg.windows,
                                        Box::cube(cfg.scheme.physical_dim(), radius));
            ordered_json j;
            j["singular"] = res.singular;
            j["exhaustive"] = res.exhaustive;
            if (res.witness) {
                ordered_json pos = ordered_json::array();
                for (int i = 0; i < cfg.scheme.physical_dim(); ++i)
                    pos.push_back(res.witness->pos[i].to_double());
                j["witness"] = pos;
                j["witness_colour"] = res.witness_colour;
            }
            return j.dump();
        },
        py::arg("scheme"), py::arg("c"), py::arg("radius"));

    m.def(
        "reduce",
        [](const SchemeConfig& cfg) {
            auto stab = window_stabilizer(cfg.windows);
            auto [reduced, rwin] = irredundant_reduction(cfg.scheme, cfg.windows);
            SchemeConfig out{cfg.name.empty() ? "" : cfg.name + "-reduced", reduced, rwin};
            return py::make_tuple(out, stab);
        },
        py::arg("scheme"));

    m.def(
        "analyze_json",
        [](const SchemeConfig& cfg, double radius, const std::vector<double>& k_radii) {
            auto patch = generate_patch(cfg, radius, "half-open");
            AveragingSequence seq =
                AveragingSequence::geometric_to(cfg.scheme.physical_dim(), radius, 5);
            return analyze_report(cfg, patch, seq, k_radii).dump();
        },
        py::arg("scheme"), py::arg("radius"), py::arg("k_radii"));

    m.def(
        "topology_probe_json",
        [](const SchemeConfig& cfg, const std::vector<std::vector<int64_t>>& ts) {
            std::vector<std::array<int64_t, 4>> seq;
            for (const auto& t : ts) seq.push_back(coeffs_from(cfg, t));
            auto rep = topology_probe(cfg.scheme, cfg.windows, seq);
            ordered_json j;
            ordered_json entries = ordered_json::array();
            for (const auto& e : rep.entries)
                entries.push_back(
                    ordered_json{{"phi_norm", e.phi_norm}, {"d", e.d_value}});
            j["entries"] = entries;
            j["co_monotone"] = rep.co_monotone;
            j["modulus_bound_holds"] = rep.modulus_bound_holds;
            if (rep.redundancy_witness_label)
                j["redundancy_witness_label"] = *rep.redundancy_witness_label;
            return j.dump();
        },
        py::arg("scheme"), py::arg("ts"));
}
