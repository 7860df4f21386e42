"""Cut-and-project model multi-sets.

Exact enumeration of model sets from cut-and-project schemes, the
autocorrelation pseudo-metric, and the torus parametrization (internal
parameter c, gamma map, window reconstruction, singularity tests).
"""

import json
import os
import sys

# When driven from the CMake tree the compiled module sits in the build
# directory; wheels install it next to this file.
_core_dir = os.environ.get("MODELSET_CORE_DIR")
if _core_dir and _core_dir not in sys.path:
    sys.path.insert(0, _core_dir)

try:
    from modelset._core import (  # type: ignore
        ConfigError,
        InconsistentPatchError,
        PreconditionError,
        Scheme,
        SchemeError,
        __version__,
        d_analytic,
        generate,
        load_scheme_json,
        preset,
        preset_names,
        reduce,
        scheme_to_json,
        star_map,
    )
    from modelset import _core
except ImportError:
    import _core  # type: ignore
    from _core import (  # type: ignore
        ConfigError,
        InconsistentPatchError,
        PreconditionError,
        Scheme,
        SchemeError,
        __version__,
        d_analytic,
        generate,
        load_scheme_json,
        preset,
        preset_names,
        reduce,
        scheme_to_json,
        star_map,
    )


def load_scheme(path):
    """Load a scheme config (JSON file) into a Scheme."""
    with open(path, "r", encoding="utf-8") as f:
        return load_scheme_json(f.read())


def d_empirical(scheme, t, radius):
    return json.loads(_core.d_empirical_json(scheme, list(t), radius))


def p_epsilon(scheme, epsilon, radius):
    return json.loads(_core.p_epsilon_json(scheme, epsilon, radius))


def c_gamma(scheme, radius, tol=1e-6):
    return json.loads(_core.c_gamma_json(scheme, radius, tol))


def c_gamma_streamed(scheme, tol=1e-6, max_radius=3.0e7):
    return json.loads(_core.c_gamma_streamed_json(scheme, tol, max_radius))


def reconstruct(scheme, radius, tol=1e-9):
    return json.loads(_core.reconstruct_json(scheme, radius, tol))


def singularity(scheme, c, radius):
    return json.loads(_core.singularity_json(scheme, str(c), radius))


def analyze(scheme, radius, k_radii=(2.8,)):
    return json.loads(_core.analyze_json(scheme, radius, list(k_radii)))


def topology_probe(scheme, ts):
    return json.loads(_core.topology_probe_json(scheme, [list(t) for t in ts]))


__all__ = [
    "ConfigError",
    "InconsistentPatchError",
    "PreconditionError",
    "Scheme",
    "SchemeError",
    "__version__",
    "analyze",
    "c_gamma",
    "c_gamma_streamed",
    "d_analytic",
    "d_empirical",
    "generate",
    "load_scheme",
    "load_scheme_json",
    "p_epsilon",
    "preset",
    "preset_names",
    "reconstruct",
    "reduce",
    "scheme_to_json",
    "singularity",
    "star_map",
    "topology_probe",
]
