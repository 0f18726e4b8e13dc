import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import sici

from diracrefine.diracd import Channel, coulomb_exact_d2, solve_ground_radial
from diracrefine.dirac1d import solve_ground_1d
from diracrefine.numerics import Grid, SampledFunction
from diracrefine.potentials import PSEUDO_SPIN, SPIN, PotentialSpec, evaluate
from diracrefine.problem import Problem
from diracrefine.theorems import (CrossingSet, HypothesisError, IncompatibleProblems,
                                  SelectorError, TransformConfig, Weight, compare,
                                  corollary_area_check, detect_crossings, transform_g,
                                  transform_mu, transform_p, transform_rho)

HARMONIC = PotentialSpec("harmonic", {"a": 0.5})
SINE = PotentialSpec("sine_modulated_harmonic", {"b": 0.5, "beta": 1.64})
YUKAWA = PotentialSpec("yukawa", {"alpha": 0.2, "a": 0.1})
COULOMB = PotentialSpec("coulomb", {"beta": 0.172})
D2 = Channel(2, 0.5, -1)
FAST = TransformConfig(points=2048)


def _g_sine_exact(x, b=0.5, beta=1.64):
    # int_0^x b t^2 sin(t^3+beta)/(t^3+beta) dt = (b/3) (Si(x^3+beta) - Si(beta))
    return b / 3 * (sici(x ** 3 + beta)[0] - sici(beta)[0])


@pytest.fixture(scope="module")
def g_sine():
    return transform_g(HARMONIC, SINE, 8.0)


@pytest.fixture(scope="module")
def coulomb_state():
    return solve_ground_radial(COULOMB, SPIN, 1.0, D2)


# --- g -------------------------------------------------------------------------

def test_g_identical_potentials_is_zero():
    c = transform_g(HARMONIC, HARMONIC, 5.0, FAST)
    assert np.all(c.curve.values == 0.0)
    assert c.nonnegative and c.min_value == 0.0


def test_g_sine_pair_matches_sine_integral(g_sine):
    x = g_sine.curve.x
    assert g_sine.curve.values[0] == 0.0
    assert np.max(np.abs(g_sine.curve.values - _g_sine_exact(x))) < 1e-11
    assert g_sine.nonnegative
    assert np.all(g_sine.curve.values[1:] > 0)
    assert g_sine.final_value == pytest.approx(0.5 / 3 * (math.pi / 2 - sici(1.64)[0]), abs=1e-9)


def test_g_swap_negates(g_sine):
    swapped = transform_g(SINE, HARMONIC, 8.0)
    assert np.allclose(swapped.curve.values, -g_sine.curve.values, atol=1e-14)
    assert not swapped.nonnegative


# --- p -------------------------------------------------------------------------

def test_p_identical_is_zero():
    st_ = solve_ground_1d(HARMONIC, SPIN, 1.2)
    c = transform_p(HARMONIC, HARMONIC, st_, SPIN, FAST)
    assert np.all(c.curve.values == 0.0) and c.nonnegative


def test_p_weight_keeps_integrand_sign():
    st_ = solve_ground_1d(HARMONIC, SPIN, 1.2)
    c = transform_p(HARMONIC, SINE, st_, SPIN, FAST)
    x = c.curve.x
    mid = 0.5 * (x[1:] + x[:-1])
    h = evaluate(SINE, mid) - evaluate(HARMONIC, mid)
    dp = np.diff(c.curve.values)
    big = np.abs(h) > 1e-6 * np.max(np.abs(h))
    big &= np.abs(dp) > 1e-14
    assert np.all(np.sign(dp[big]) == np.sign(h[big]))


def test_p_rescues_pair_where_g_fails():
    # sech^2 (beta = b = 1, exact E = 0) against a long-range cut-off Coulomb well:
    # g -> -inf through the 1/x tail, the decaying weight keeps p >= 0
    Va = PotentialSpec("sech_squared", {"beta": 1.0, "b": 1.0})
    Vb = PotentialSpec("cutoff_coulomb", {"v": 0.5, "a": 1.0})
    sa, sb = solve_ground_1d(Va, SPIN, 1.0), solve_ground_1d(Vb, SPIN, 1.0)
    R = max(sa.x_max, sb.x_max)
    assert not transform_g(Va, Vb, R).nonnegative
    assert transform_p(Va, Vb, sa, SPIN).nonnegative
    assert transform_p(Va, Vb, sb, SPIN).nonnegative
    assert sa.E == pytest.approx(0.0, abs=1e-9)
    assert sa.E <= sb.E


def test_p_selector_mismatch():
    st_ = solve_ground_1d(HARMONIC, SPIN, 1.2)
    with pytest.raises(SelectorError):
        transform_p(HARMONIC, SINE, st_, SPIN, FAST, component=2)
    with pytest.raises(SelectorError):
        transform_p(HARMONIC, SINE, st_, PSEUDO_SPIN, FAST)


# --- rho / mu ------------------------------------------------------------------

def test_rho_yukawa_coulomb_closed_form():
    # weight r^1: rho(r) = alpha (1 - e^{-a r}) / a - beta r
    c = transform_rho(YUKAWA, COULOMB, SPIN, D2, 30.0)
    r = c.curve.x
    exact = 0.2 * (1 - np.exp(-0.1 * r)) / 0.1 - 0.172 * r
    assert np.max(np.abs(c.curve.values - exact)) < 1e-10
    assert not c.nonnegative


def test_rho_identical_and_scaling():
    zero = transform_rho(YUKAWA, YUKAWA, SPIN, D2, 20.0, FAST)
    assert np.all(zero.curve.values == 0.0)
    c = transform_rho(YUKAWA, COULOMB, SPIN, D2, 20.0, FAST)
    c3 = transform_rho(YUKAWA.scaled(3.0), COULOMB.scaled(3.0), SPIN, D2, 20.0, FAST)
    assert np.allclose(c3.curve.values, 3 * c.curve.values, rtol=1e-12, atol=1e-13)
    assert c3.nonnegative == c.nonnegative


def test_rho_requires_negative_sk():
    with pytest.raises(HypothesisError):
        transform_rho(YUKAWA, COULOMB, SPIN, Channel(2, 0.5, 1), 20.0)


def test_mu_infinity_exact_weight():
    ex = coulomb_exact_d2(0.172)
    c = transform_mu(YUKAWA, COULOMB, ex, SPIN, D2)
    kap = ex.decay
    exact = 0.2 / (0.1 + kap) - 0.172 / kap
    assert c.final_value == pytest.approx(exact, abs=1e-10)
    assert c.final_value == pytest.approx(0.00006, abs=2e-5)
    assert c.nonnegative


def test_mu_lower_bound_pair_negative():
    ex = coulomb_exact_d2(0.201)
    Vb = PotentialSpec("coulomb", {"beta": 0.201})
    c = transform_mu(YUKAWA, Vb, ex, SPIN, D2)
    assert c.final_value < 0
    assert not c.nonnegative


def test_mu_identical_zero(coulomb_state):
    c = transform_mu(COULOMB, COULOMB, coulomb_state, SPIN, D2, FAST)
    assert np.all(c.curve.values == 0.0)


def test_mu_sampled_state_agrees_with_exact_weight(coulomb_state):
    ex = coulomb_exact_d2(0.172)
    exact = transform_mu(YUKAWA, COULOMB, ex, SPIN, D2)
    sampled = transform_mu(YUKAWA, COULOMB, coulomb_state, SPIN, D2)
    # normalisation differs; the sign verdict may not
    assert sampled.nonnegative == exact.nonnegative


def test_mu_selector_mismatch(coulomb_state):
    with pytest.raises(SelectorError):
        transform_mu(YUKAWA, COULOMB, coulomb_state, SPIN, D2, component=2)
    with pytest.raises(SelectorError):
        transform_mu(YUKAWA, COULOMB, coulomb_exact_d2(0.172), PSEUDO_SPIN, Channel(2, 0.5, 1))


# --- crossings and corollaries -------------------------------------------------

def test_yukawa_coulomb_single_crossing():
    cs = detect_crossings(YUKAWA, COULOMB, (0.0, 50.0))
    assert cs.count == 1 and cs.n == 1
    assert cs.ordered_first_interval
    assert cs.points[0] == pytest.approx(math.log(0.2 / 0.172) / 0.1, abs=1e-10)


def test_sine_pair_crossings():
    cs = detect_crossings(HARMONIC, SINE, (0.0, 4.0))
    kmax = int((64 + 1.64) / math.pi)
    expected = [(k * math.pi - 1.64) ** (1 / 3) for k in range(1, kmax + 1)]
    assert cs.points == pytest.approx(expected, abs=1e-9)
    assert cs.ordered_first_interval


def test_shifted_pair_has_no_crossing():
    Va = PotentialSpec("harmonic", {"a": 0.5})
    Vb = PotentialSpec("user_tabulated", {"x": np.linspace(0, 10, 201).tolist(),
                                          "v": (0.5 * np.linspace(0, 10, 201) ** 2 + 1).tolist(),
                                          "tail": "+inf"})
    assert detect_crossings(Va, Vb, (0.0, 10.0)).count == 0


def test_sine_pair_lobes():
    cs = detect_crossings(HARMONIC, SINE, (0.0, 4.0))
    area = corollary_area_check(HARMONIC, SINE, cs)
    scale = 0.5 / 3
    assert area.lobes[0] == pytest.approx(0.43810 * scale, abs=1e-5 * scale)
    assert area.lobes[1] == pytest.approx(0.43379 * scale, abs=1e-5 * scale)
    assert all(a > b for a, b in zip(area.lobes[:20], area.lobes[1:21]))
    assert area.verdict == "positive"


def test_single_crossing_with_positive_total():
    # int sech^2(b x) = 1/b: g(inf) = -0.5 + 1/1.5 > 0
    Va = PotentialSpec("sech_squared", {"beta": 1.0, "b": 1.5})
    Vb = PotentialSpec("sech_squared", {"beta": 0.5, "b": 1.0})
    cs = detect_crossings(Va, Vb, (0.0, 30.0))
    assert cs.count == 1
    area = corollary_area_check(Va, Vb, cs)
    assert area.verdict == "positive"
    g = transform_g(Va, Vb, 30.0)
    assert g.nonnegative
    assert g.final_value == pytest.approx(-0.5 + 1 / 1.5, abs=1e-10)


def test_two_crossings_with_negative_middle_is_inconclusive():
    Va = PotentialSpec("zero")
    Vb = PotentialSpec("user_tabulated", {"x": [0, 1, 2, 3, 4, 5, 6],
                                          "v": [0.1, 0.1, -1, -1, 0.5, 0.5, 0], "tail": "zero"})
    cs = detect_crossings(Va, Vb, (0.0, 6.0))
    assert cs.count == 2
    area = corollary_area_check(Va, Vb, cs)
    assert area.verdict == "inconclusive"
    assert not transform_g(Va, Vb, 6.0).nonnegative


def test_first_interval_violation_is_inconclusive():
    cs = detect_crossings(COULOMB, YUKAWA, (0.0, 50.0))
    assert not cs.ordered_first_interval
    assert corollary_area_check(COULOMB, YUKAWA, cs).verdict == "inconclusive"


# --- compare -------------------------------------------------------------------

def test_compare_theorem3_example():
    scalar = PotentialSpec("coulomb", {"beta": 0.7})
    pa = Problem(PotentialSpec("softcore", {"alpha": 0.8, "a": 1.6, "q": 3.0}), 1.0, 5, None,
                 scalar, j=0.5, tau=-1)
    pb = Problem(PotentialSpec("sech_squared", {"beta": 0.5, "b": 0.31}), 1.0, 5, None, scalar,
                 j=0.5, tau=-1)
    rep = compare(pa, pb)
    assert rep.theorem_applied == "T3"
    assert rep.predicted == "E_a<=E_b" and rep.consistent
    assert rep.verified[0] == pytest.approx(0.77260, abs=1e-4)
    assert rep.verified[1] == pytest.approx(0.81648, abs=1e-4)


def test_compare_harmonic_pair():
    rep = compare(Problem(HARMONIC, 1.2), Problem(SINE, 1.2))
    assert rep.hypothesis_satisfied
    assert rep.theorem_applied in ("T1", "C1", "n-intersection")
    assert rep.consistent
    assert rep.verified[0] == pytest.approx(1.77935, abs=1e-4)
    assert rep.verified[1] == pytest.approx(1.85470, abs=1e-4)


def test_compare_yukawa_coulomb_c5():
    pa, pb = Problem(YUKAWA, 1.0, 2, 1, j=0.5, tau=-1), Problem(COULOMB, 1.0, 2, 1, j=0.5, tau=-1)
    rep = compare(pa, pb, strategy="C5")
    assert rep.theorem_applied == "C5"
    assert rep.details["T5"]["weight_source"] == "exact Coulomb psi"
    assert rep.consistent and rep.verified[0] <= rep.verified[1]
    swapped = compare(pb, pa, strategy="C5")
    assert swapped.predicted == "inconclusive" and swapped.consistent


def test_compare_lower_bound_pair():
    Vb = PotentialSpec("coulomb", {"beta": 0.201})
    pa, pb = Problem(YUKAWA, 1.0, 2, 1, j=0.5, tau=-1), Problem(Vb, 1.0, 2, 1, j=0.5, tau=-1)
    rep = compare(pa, pb)
    assert rep.theorem_applied == "basic"
    assert rep.predicted == "E_a>=E_b"
    assert rep.verified[0] > rep.verified[1]
    assert rep.verified[1] == pytest.approx(coulomb_exact_d2(0.201).E, abs=1e-6)


def test_incompatible_problems():
    with pytest.raises(IncompatibleProblems):
        compare(Problem(HARMONIC, 1.2), Problem(SINE, 1.0))
    with pytest.raises(IncompatibleProblems):
        compare(Problem(YUKAWA, 1.0, 2, 1), Problem(COULOMB, 1.0, 3, 1))


def test_weight_evaluation():
    w = Weight("power", 2.0)
    assert w(3.0) == pytest.approx(9.0)
    f = SampledFunction(Grid(np.linspace(0, 1, 5)), np.ones(5))
    assert transform_p(HARMONIC, HARMONIC, f, SPIN, FAST).weight.support == 1.0


def test_crossing_set_count_alias():
    cs = CrossingSet([1.0, 2.0], True)
    assert cs.count == cs.n == 2


# --- properties ------------------------------------------------------------------

_SHORT = st.builds(lambda b, w: PotentialSpec("sech_squared", {"beta": b, "b": w}),
                   st.floats(0.2, 3.0), st.floats(0.3, 2.0))
_SOFT = st.builds(lambda al, a, q: PotentialSpec("softcore", {"alpha": al, "a": a, "q": q}),
                  st.floats(0.2, 3.0), st.floats(0.3, 2.0), st.sampled_from([1.0, 2.0, 3.0]))
_FINITE = st.one_of(_SHORT, _SOFT)


@settings(max_examples=15, deadline=None)
@given(_FINITE, _FINITE)
def test_antisymmetry(Va, Vb):
    ab = transform_g(Va, Vb, 15.0, FAST)
    ba = transform_g(Vb, Va, 15.0, FAST)
    assert np.allclose(ab.curve.values, -ba.curve.values, atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(_FINITE, _FINITE, _FINITE)
def test_linearity_in_the_difference(Va, Vb, Vc):
    curves = [transform_g(x, y, 15.0, FAST).curve for x, y in ((Va, Vb), (Vb, Vc), (Va, Vc))]
    # compare on shared nodes; interpolating between nodes adds O(h^2) error
    shared = curves[0].x
    for c in curves[1:]:
        shared = np.intersect1d(shared, c.x)
    assert shared.size > 1000
    ab, bc, ac = (c.values[np.searchsorted(c.x, shared)] for c in curves)
    assert np.allclose(ab + bc, ac, rtol=0, atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(_FINITE, _FINITE)
def test_every_curve_starts_at_zero(Va, Vb):
    assert transform_g(Va, Vb, 15.0, FAST).curve.values[0] == 0.0
    assert transform_rho(Va, Vb, SPIN, D2, 15.0, FAST).curve.values[0] == 0.0


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.3, 2.0), st.floats(1.0, 3.0))
def test_pointwise_order_implies_area_transforms(beta, b, factor):
    # V_a = factor * V_b with V_b <= 0 is deeper, so V_a <= V_b everywhere
    Vb = PotentialSpec("sech_squared", {"beta": beta, "b": b})
    Va = Vb.scaled(factor)
    assert transform_g(Va, Vb, 15.0, FAST).nonnegative
    assert transform_rho(Va, Vb, SPIN, D2, 15.0, FAST).nonnegative


@settings(max_examples=15, deadline=None)
@given(_FINITE, _FINITE)
def test_positive_area_check_implies_nonnegative_curve(Va, Vb):
    cs = detect_crossings(Va, Vb, (0.0, 20.0), FAST)
    area = corollary_area_check(Va, Vb, cs, config=FAST)
    if area.verdict == "positive":
        assert transform_g(Va, Vb, 20.0, FAST).nonnegative
