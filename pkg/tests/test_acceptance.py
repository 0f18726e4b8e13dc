"""Acceptance criteria 1-8; each test records one PASS/FAIL line for the summary."""
import time

import numpy as np
import pytest

from diracrefine.diracd import coulomb_exact_d2, node_structure
from diracrefine.potentials import SPIN, PotentialSpec
from diracrefine.problem import Problem
from diracrefine.registry import _radial, sine_lobe_areas
from diracrefine.sweeps import summarize, sweep
from diracrefine.theorems import (_difference, compare, detect_crossings, exact_coulomb_for,
                                  transform_g, transform_mu)

RESULTS: dict[int, str] = {}


def _record(number, title):
    def wrap(fn):
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException as exc:
                RESULTS[number] = f"FAIL  criterion {number}: {title} ({type(exc).__name__}: {exc})"
                print(RESULTS[number])
                raise
            RESULTS[number] = f"PASS  criterion {number}: {title} [{time.perf_counter() - t0:.1f} s]"
            print(RESULTS[number])
        run.__name__ = fn.__name__
        return run
    return wrap


@_record(1, "1D harmonic vs sine-modulated harmonic")
def test_criterion_1_harmonic_pair():
    t0 = time.perf_counter()
    pa = Problem(PotentialSpec("harmonic", {"a": 0.5}), 1.2)
    pb = Problem(PotentialSpec("sine_modulated_harmonic", {"b": 0.5, "beta": 1.64}), 1.2)
    sa, sb = pa.solve(), pb.solve()
    assert abs(sa.E - 1.77935) <= 1e-4
    assert abs(sb.E - 1.85470) <= 1e-4
    assert transform_g(pa.potential, pb.potential, max(sa.x_max, sb.x_max)).nonnegative
    rep = compare(pa, pb, states=(sa, sb))
    assert rep.consistent and rep.predicted == "E_a<=E_b"
    assert time.perf_counter() - t0 < 5.0


@_record(2, "lobe areas of |sin z|/z")
def test_criterion_2_lobes():
    lobes = sine_lobe_areas(1.64, 20)
    assert abs(lobes[0] - 0.43810) <= 1e-5
    assert abs(lobes[1] - 0.43379) <= 1e-5
    assert len(lobes) == 20
    assert all(a > b for a, b in zip(lobes[:-1], lobes[1:]))


@_record(3, "d=5 common-scalar soft-core vs sech^2")
def test_criterion_3_common_scalar():
    S = PotentialSpec("coulomb", {"beta": 0.7})
    pa = _radial("softcore", {"alpha": 0.8, "a": 1.6, "q": 3.0}, 5, 0.5, -1, scalar=S)
    pb = _radial("sech_squared", {"beta": 0.5, "b": 0.31}, 5, 0.5, -1, scalar=S)
    Ea, Eb = pa.solve().E, pb.solve().E
    assert abs(Ea - 0.77260) <= 1e-4
    assert abs(Eb - 0.81648) <= 1e-4
    assert Ea <= Eb


@_record(4, "cut-off Coulomb states and their nodes")
def test_criterion_4_cutoff_coulomb():
    left = _radial("cutoff_coulomb", {"v": 1.5, "a": 0.01}, 4, 0.5, 1).solve()
    assert abs(left.E - 0.47399) <= 1e-4
    rep = node_structure(left, SPIN)
    assert rep.nodes1 >= 1 or rep.nodes2 >= 1
    right = _radial("cutoff_coulomb", {"v": 2.5, "a": 1.2}, 7, 2.5, -1).solve()
    assert abs(right.E - 0.69329) <= 1e-4
    assert right.nodes1 == 0 and right.nodes2 == 0


@_record(5, "exact d=2 Coulomb closed form")
def test_criterion_5_coulomb_closed_form():
    for beta in np.linspace(0.005, 0.5, 100):
        ex = coulomb_exact_d2(float(beta))
        assert ex.E == pytest.approx((1 - 4 * beta ** 2) / (1 + 4 * beta ** 2), abs=1e-15)
        assert abs(ex.quadratic_residual()) <= 1e-12
    ex = coulomb_exact_d2(0.172)
    assert abs(ex.E - 0.78837) <= 1e-5
    st_ = _radial("coulomb", {"beta": 0.172}, 2, 0.5, -1).solve()
    assert abs(st_.E - ex.E) <= 1e-6


@_record(6, "single crossing, mu(inf) >= 0, ordered eigenvalues")
def test_criterion_6_yukawa_coulomb():
    pa = _radial("yukawa", {"alpha": 0.2, "a": 0.1}, 2, 0.5, -1)
    pb = _radial("coulomb", {"beta": 0.172}, 2, 0.5, -1)
    sa, sb = pa.solve(), pb.solve()
    R = max(sa.r_max, sb.r_max)
    assert detect_crossings(pa.potential, pb.potential, (0.0, R)).count == 1
    mu = transform_mu(pa.potential, pb.potential, exact_coulomb_for(pb), SPIN, pa.channel,
                      R_max=R)
    assert abs(mu.final_value - 0.00006) <= 2e-5
    assert mu.final_value >= 0
    assert abs(sa.E - 0.75632) <= 1e-4
    assert abs(sb.E - 0.78837) <= 1e-4
    assert sa.E <= sb.E


@_record(7, "lower-bound pair with beta = 0.201")
def test_criterion_7_lower_bound():
    pa = _radial("yukawa", {"alpha": 0.2, "a": 0.1}, 2, 0.5, -1)
    pb = _radial("coulomb", {"beta": 0.201}, 2, 0.5, -1)
    sa, sb = pa.solve(), pb.solve()
    R = max(sa.r_max, sb.r_max)
    r = np.unique(np.concatenate([np.geomspace(1e-9, 1.0, 20000) * R,
                                  np.linspace(0.0, R, 200001)[1:]]))
    assert np.all(_difference(pa.potential, pb.potential)(r) < 0)  # V_a > V_b
    assert sa.E > sb.E
    closed = coulomb_exact_d2(0.201).E
    assert abs(sb.E - closed) <= 1e-6
    # the printed 0.70010 is recorded, not asserted
    print(f"INFO  printed E_b = 0.70010; solver {sb.E:.5f}; closed form {closed:.5f}")


@pytest.mark.slow
@_record(8, "property sweep, 200 pairs per symmetry mode")
def test_criterion_8_property_sweep():
    t0 = time.perf_counter()
    for s, seed in ((1, 20240), (-1, 20241)):
        stats = summarize(sweep(s, 200, seed))
        print(f"      s={s:+d}: {stats}")
        assert stats["pairs"] >= 200
        assert stats["violations"] == 0          # (a) and (b)
        assert stats["lemma_failures"] == 0      # (c)
        assert stats["window_failures"] == 0     # (d)
        assert stats["max_reduced_delta"] < 5e-5  # (e)
        assert stats["pointwise_ordered"] > 0 and stats["refined_hypothesis_met"] > 0
    assert time.perf_counter() - t0 < 600
