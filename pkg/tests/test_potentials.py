import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from diracrefine.dirac1d import solve_ground_1d
from diracrefine.potentials import (PSEUDO_SPIN, SPIN, PotentialClass, PotentialError,
                                    PotentialSpec, SymmetryMode, classify, difference,
                                    energy_window, evaluate)

r = sp.Symbol("r", positive=True)

# symbolic transcriptions of the catalog formulas, kept literal on purpose
SYMBOLIC = {
    "harmonic": ({"a": 0.5}, lambda p: p["a"] * r ** 2),
    "sine_modulated_harmonic": ({"b": 0.5, "beta": 1.64},
                                lambda p: p["b"] * r ** 2 * (1 + sp.sin(r ** 3 + p["beta"])
                                                            / (r ** 3 + p["beta"]))),
    "coulomb": ({"beta": 0.172}, lambda p: -p["beta"] / r),
    "cutoff_coulomb": ({"v": 1.5, "a": 0.01}, lambda p: -p["v"] / (r + p["a"])),
    "yukawa": ({"alpha": 0.2, "a": 0.1}, lambda p: -p["alpha"] / (r * sp.exp(p["a"] * r))),
    "softcore": ({"alpha": 0.8, "a": 1.6, "q": 3.0},
                 lambda p: -p["alpha"] / (r ** p["q"] + p["a"] ** p["q"]) ** (1 / p["q"])),
    "sech_squared": ({"beta": 0.5, "b": 0.31},
                     lambda p: -4 * p["beta"] / (sp.exp(p["b"] * r) + sp.exp(-p["b"] * r)) ** 2),
}


@pytest.mark.parametrize("kind", sorted(SYMBOLIC))
def test_matches_symbolic_reference(kind):
    params, build = SYMBOLIC[kind]
    ref = sp.lambdify(r, build(params), "numpy")
    xs = np.linspace(1e-3, 60.0, 1_000_000)
    got = evaluate(PotentialSpec(kind, params), xs)
    want = ref(xs)
    assert np.all(np.isfinite(got))
    err = np.abs(got - want)
    assert np.all(err <= 1e-13 * np.abs(want) + 1e-300)


@pytest.mark.parametrize("kind", sorted(SYMBOLIC))
def test_matches_high_precision_points(kind):
    params, build = SYMBOLIC[kind]
    expr = build(params)
    spec = PotentialSpec(kind, params)
    for x in np.geomspace(1e-3, 40.0, 25):
        exact = float(expr.subs(r, sp.Float(float(x), 40)).evalf(30))
        assert evaluate(spec, float(x)) == pytest.approx(exact, rel=1e-13, abs=1e-300)


def test_point_values():
    assert evaluate(PotentialSpec("harmonic", {"a": 0.5}), 2.0) == 2.0
    assert evaluate(PotentialSpec("cutoff_coulomb", {"v": 1.5, "a": 0.01}), 0.0) == pytest.approx(-150.0)
    assert evaluate(PotentialSpec("sine_modulated_harmonic", {"b": 0.5, "beta": 1.64}), 0.0) == 0.0


def test_singular_kinds_refuse_origin():
    with pytest.raises(PotentialError):
        evaluate(PotentialSpec("coulomb", {"beta": 0.2}), 0.0)
    with pytest.raises(PotentialError):
        evaluate(PotentialSpec("yukawa", {"alpha": 0.2, "a": 0.1}), np.array([0.0, 1.0]))
    with pytest.raises(PotentialError):
        evaluate(PotentialSpec("harmonic", {"a": 1.0}), -1.0)


def test_singular_kinds_rejected_in_1d():
    with pytest.raises(PotentialError):
        solve_ground_1d(PotentialSpec("coulomb", {"beta": 0.2}), SPIN, 1.0)


@pytest.mark.parametrize("kind, params", [
    ("cutoff_coulomb", {"v": 1.0, "a": 0.0}),
    ("softcore", {"alpha": 1.0, "a": 1.0, "q": 0.5}),
    ("softcore", {"alpha": 1.0, "a": -1.0, "q": 2.0}),
    ("sech_squared", {"beta": 1.0, "b": 0.0}),
    ("harmonic", {}),
    ("harmonic", {"a": 1.0, "b": 2.0}),
    ("harmonic", {"a": math.nan}),
    ("woods_saxon", {}),
])
def test_invalid_parameters(kind, params):
    with pytest.raises(PotentialError):
        PotentialSpec(kind, params)


def test_tabulated_needs_declared_tail():
    with pytest.raises(PotentialError):
        PotentialSpec("user_tabulated", {"x": [0, 1, 2], "v": [-1, -0.5, 0]})
    spec = PotentialSpec("user_tabulated", {"x": [0, 1, 2], "v": [-1, -0.5, 0], "tail": "zero"})
    assert classify(spec, SPIN) == PotentialClass.CLASS1
    assert evaluate(spec, 0.5) == pytest.approx(-0.75)
    assert evaluate(spec, 5.0) == 0.0


@pytest.mark.parametrize("spec, mode, expected", [
    (PotentialSpec("coulomb", {"beta": 0.172}), SPIN, PotentialClass.CLASS1),
    (PotentialSpec("harmonic", {"a": 0.5}), SPIN, PotentialClass.CLASS2),
    (PotentialSpec("harmonic", {"a": 0.5}), PSEUDO_SPIN, PotentialClass.CLASS3),
    (PotentialSpec("harmonic", {"a": -0.5}), PSEUDO_SPIN, PotentialClass.CLASS2),
    (PotentialSpec("coulomb", {"beta": -0.3}), PSEUDO_SPIN, PotentialClass.CLASS1),
    (PotentialSpec("coulomb", {"beta": 0.3}), PSEUDO_SPIN, PotentialClass.UNCLASSIFIED),
])
def test_classify(spec, mode, expected):
    assert classify(spec, mode) == expected


def test_energy_windows():
    assert energy_window(PotentialClass.CLASS1, SPIN, 1.0) == (-1.0, 1.0)
    assert energy_window(PotentialClass.CLASS1, PSEUDO_SPIN, 1.0) == (-1.0, 1.0)
    lo, hi = energy_window(PotentialClass.CLASS2, PSEUDO_SPIN, 1.0)
    assert hi == -1.0 and lo == -math.inf
    lo, hi = energy_window(PotentialClass.CLASS3, PSEUDO_SPIN, 1.0)
    assert lo == 1.0 and hi == math.inf
    with pytest.raises(PotentialError):
        energy_window(PotentialClass.UNCLASSIFIED, SPIN, 1.0)


def test_class3_window_confirmed_by_spectrum():
    # harmonic with s = -1: the computed ground state must sit above +m
    V = PotentialSpec("harmonic", {"a": 0.5})
    st_ = solve_ground_1d(V, PSEUDO_SPIN, 1.0)
    assert st_.E > 1.0
    # mirror: E(s=-1, V) = -E(s=+1, -V)
    mirror = solve_ground_1d(V.scaled(-1.0), SPIN, 1.0)
    assert mirror.E < -1.0
    assert st_.E == pytest.approx(-mirror.E, abs=1e-9)


def test_difference_identities():
    a = PotentialSpec("yukawa", {"alpha": 0.2, "a": 0.1})
    b = PotentialSpec("coulomb", {"beta": 0.172})
    assert difference(a, a)(np.linspace(0.1, 5, 7)) == pytest.approx(np.zeros(7))
    assert difference(a, b)(0.01) == pytest.approx(2.78, abs=5e-3)
    h = PotentialSpec("harmonic", {"a": 0.5})
    sm = PotentialSpec("sine_modulated_harmonic", {"b": 0.5, "beta": 1.64})
    x = np.linspace(0.0, 3.0, 50)
    assert difference(h, sm)(x) == pytest.approx(0.5 * x ** 2 * np.sin(x ** 3 + 1.64) / (x ** 3 + 1.64),
                                                  abs=1e-14)


@pytest.mark.parametrize("V, far", [
    (PotentialSpec("yukawa", {"alpha": 0.2, "a": 0.1}), 400.0),
    (PotentialSpec("sech_squared", {"beta": 0.5, "b": 0.31}), 200.0),
    (PotentialSpec("softcore", {"alpha": 1.2, "a": 1.0, "q": 2.0}), 1e12),
    (PotentialSpec("cutoff_coulomb", {"v": 2.5, "a": 1.2}), 1e12),
    (PotentialSpec("coulomb", {"beta": 0.172}), 1e12),
])
def test_class1_potentials_vanish_numerically(V, far):
    assert classify(V, SPIN) == PotentialClass.CLASS1
    assert V.limit_at_infinity() == 0.0
    assert abs(evaluate(V, far)) < 1e-10


def test_symmetry_mode():
    assert SymmetryMode(1).q == 1 and SymmetryMode(-1).q == 2
    with pytest.raises(ValueError):
        SymmetryMode(0)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(SYMBOLIC)), st.floats(-3.0, 3.0).filter(lambda f: abs(f) > 1e-3))
def test_dict_round_trip_and_scaling(kind, factor):
    spec = PotentialSpec(kind, SYMBOLIC[kind][0])
    assert PotentialSpec.from_dict(spec.to_dict()) == spec
    xs = np.linspace(0.05, 10.0, 40)
    assert evaluate(spec.scaled(factor), xs) == pytest.approx(factor * evaluate(spec, xs), rel=1e-13)
