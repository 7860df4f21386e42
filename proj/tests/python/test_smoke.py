import math

import pytest

import modelset


TAU = (1 + math.sqrt(5)) / 2


def test_presets_load():
    names = modelset.preset_names()
    assert set(names) == {"fibonacci", "silver-mean", "ammann-beenker", "redundant-k2"}
    fib = modelset.preset("fibonacci")
    assert fib.n == 1 and fib.d == 1 and fib.k == 1 and fib.field_d == 5
    assert fib.covolume == pytest.approx(math.sqrt(5))
    ab = modelset.preset("ammann-beenker")
    assert ab.n == 2 and ab.d == 2


def test_scheme_json_round_trip():
    fib = modelset.preset("fibonacci")
    text = modelset.scheme_to_json(fib)
    back = modelset.load_scheme_json(text)
    assert back.scheme_hash == fib.scheme_hash
    assert back.window_hash == fib.window_hash


def test_star_map_conjugation():
    fib = modelset.preset("fibonacci")
    real, exact, label = modelset.star_map(fib, [0, 1])
    assert label == 0
    assert real[0] == pytest.approx((1 - math.sqrt(5)) / 2)
    assert exact[0] == "1/2-1/2*sqrt5"


def test_generate_density_and_gaps():
    fib = modelset.preset("fibonacci")
    pts = modelset.generate(fib, 100.0)
    assert abs(len(pts) - 200 / math.sqrt(5)) <= 3
    xs = sorted(p["position"][0] for p in pts)
    gaps = {round(b - a, 9) for a, b in zip(xs, xs[1:])}
    assert gaps == {round(TAU, 9), round(TAU * TAU, 9)}


def test_autocorrelation_agreement():
    fib = modelset.preset("fibonacci")
    ana = modelset.d_analytic(fib, [1, 1])
    assert ana == pytest.approx(0.3416407865, abs=1e-9)
    emp = modelset.d_empirical(fib, [1, 1], 1000.0)
    assert abs(emp["value"] - ana) < 0.02


def test_p_epsilon_identity():
    fib = modelset.preset("fibonacci")
    res = modelset.p_epsilon(fib, 0.1, 2000.0)
    assert res["identity_checked"] and res["identity_holds"]
    assert res["ball_radius"] == pytest.approx(0.1118033989)
    assert res["count"] > 10


def test_c_gamma_contains_zero():
    fib = modelset.preset("fibonacci")
    cert = modelset.c_gamma(fib, 500.0, tol=1e-9)
    assert cert["lo"] <= 0 <= cert["hi"]
    assert cert["diameter"] < 0.05


def test_singularity_dichotomy():
    fib = modelset.preset("fibonacci")
    res = modelset.singularity(fib, 0, 1000.0)
    assert res["singular"] and res["exhaustive"]


def test_reduce_redundant():
    red = modelset.preset("redundant-k2")
    reduced, stabilizer = modelset.reduce(red)
    assert stabilizer == [0, 1]
    assert reduced.k == 1


def test_analyze_flc():
    fib = modelset.preset("fibonacci")
    rep = modelset.analyze(fib, 500.0, k_radii=[2.8])
    assert rep["flc"][0]["class_count"] == 3
    assert rep["density"][0]["limit"] == pytest.approx(1 / math.sqrt(5), rel=0.05)


def test_errors_are_typed():
    fib = modelset.preset("fibonacci")
    with pytest.raises(modelset.ConfigError):
        modelset.load_scheme_json("{ not json")
