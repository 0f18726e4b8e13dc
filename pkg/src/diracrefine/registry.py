"""
Registry of reference experiments with their expected values.

Each record rebuilds its problems from scratch, runs the solvers and
transforms, and compares every measured quantity with the stored value.
Provenance tags: PAPER (printed reference value), DERIVED (closed form or
independent computation), TRIVIAL (structural fact).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from .diracd import coulomb_exact_d2, node_structure
from .numerics import QuadratureConfig, quad_oscillatory
from .potentials import SPIN, PotentialSpec
from .problem import Problem
from .theorems import (_difference, compare, corollary_area_check, detect_crossings,
                       exact_coulomb_for, transform_g, transform_mu)


@dataclass(frozen=True)
class Expected:
    name: str
    value: float | bool
    tolerance: float = 0.0
    provenance: str = "PAPER"
    info_only: bool = False


@dataclass
class Check:
    name: str
    expected: float | bool
    measured: float | bool
    tolerance: float
    provenance: str
    status: str  # PASS, FAIL or INFO
    note: str = ""

    @property
    def delta(self):
        if isinstance(self.expected, bool) or isinstance(self.measured, bool):
            return None
        return float(self.measured) - float(self.expected)

    def to_dict(self) -> dict:
        return {"name": self.name, "expected": self.expected, "measured": self.measured,
                "tolerance": self.tolerance, "provenance": self.provenance,
                "status": self.status, "delta": self.delta, "note": self.note}


@dataclass
class ExperimentRecord:
    id: str
    description: str
    inputs: dict
    expected: list[Expected]
    runner: Callable[[], dict] = field(repr=False)
    notes: dict = field(default_factory=dict)

    def run(self) -> list[Check]:
        measured = self.runner()
        checks = []
        for exp in self.expected:
            got = measured[exp.name]
            if isinstance(exp.value, bool):
                ok = bool(got) == exp.value
                got = bool(got)
            else:
                ok = abs(float(got) - float(exp.value)) <= exp.tolerance
                got = float(got)
            status = "INFO" if exp.info_only else ("PASS" if ok else "FAIL")
            checks.append(Check(exp.name, exp.value, got, exp.tolerance, exp.provenance,
                                status, self.notes.get(exp.name, "")))
        return checks


def _radial(kind, params, d, j, tau, mass=1.0, scalar=None, symmetry=1):
    return Problem(PotentialSpec(kind, params), mass, d, None if scalar else symmetry,
                   scalar, j=j, tau=tau)


# -- runners --------------------------------------------------------------


def _harmonic_sine():
    pa = Problem(PotentialSpec("harmonic", {"a": 0.5}), 1.2)
    pb = Problem(PotentialSpec("sine_modulated_harmonic", {"b": 0.5, "beta": 1.64}), 1.2)
    sa, sb = pa.solve(), pb.solve()
    g = transform_g(pa.potential, pb.potential, max(sa.x_max, sb.x_max))
    rep = compare(pa, pb, states=(sa, sb))
    return {"E_a": sa.E, "E_b": sb.E, "g_nonnegative": g.nonnegative,
            "ordering_consistent": rep.consistent and rep.predicted == "E_a<=E_b"}


SOFTCORE_SCALAR = PotentialSpec("coulomb", {"beta": 0.7})


def _softcore_sech():
    pa = _radial("softcore", {"alpha": 0.8, "a": 1.6, "q": 3}, 5, 0.5, -1, scalar=SOFTCORE_SCALAR)
    pb = _radial("sech_squared", {"beta": 0.5, "b": 0.31}, 5, 0.5, -1, scalar=SOFTCORE_SCALAR)
    rep = compare(pa, pb)
    return {"E_a": rep.verified[0], "E_b": rep.verified[1],
            "T3_ordering": rep.theorem_applied == "T3" and rep.consistent
            and rep.predicted == "E_a<=E_b"}


def _fig2_left():
    st = _radial("cutoff_coulomb", {"v": 1.5, "a": 0.01}, 4, 0.5, 1).solve()
    rep = node_structure(st, SPIN)
    return {"E": st.E, "has_node": (rep.nodes1 + rep.nodes2) >= 1}


def _fig2_right():
    st = _radial("cutoff_coulomb", {"v": 2.5, "a": 1.2}, 7, 2.5, -1).solve()
    return {"E": st.E, "nodeless": st.nodes1 == 0 and st.nodes2 == 0}


YUKAWA = {"alpha": 0.2, "a": 0.1}


def _yukawa_c5():
    pa = _radial("yukawa", YUKAWA, 2, 0.5, -1)
    pb = _radial("coulomb", {"beta": 0.172}, 2, 0.5, -1)
    sa, sb = pa.solve(), pb.solve()
    R = max(sa.r_max, sb.r_max)
    crossings = detect_crossings(pa.potential, pb.potential, (0.0, R))
    mu = transform_mu(pa.potential, pb.potential, exact_coulomb_for(pb), SPIN, pa.channel,
                      R_max=R)
    rep = compare(pa, pb, states=(sa, sb))
    return {"E_a": sa.E, "E_b": sb.E, "crossings": float(crossings.count),
            "mu_infinity": mu.final_value, "mu_nonnegative": mu.nonnegative,
            "C5_ordering": rep.theorem_applied == "C5" and rep.consistent}


def _yukawa_lower():
    pa = _radial("yukawa", YUKAWA, 2, 0.5, -1)
    pb = _radial("coulomb", {"beta": 0.201}, 2, 0.5, -1)
    sa, sb = pa.solve(), pb.solve()
    R = max(sa.r_max, sb.r_max)
    r = np.concatenate([np.geomspace(1e-9, 1.0, 4000) * R, np.linspace(0, R, 20001)[1:]])
    above = bool(np.all(_difference(pa.potential, pb.potential)(r) < 0))
    return {"V_a_above_V_b": above, "E_a_greater": sa.E > sb.E, "E_a": sa.E,
            "E_b_solver_vs_closed_form": sb.E - coulomb_exact_d2(0.201).E,
            "E_b_printed": sb.E}


def _coulomb_closed():
    ex = coulomb_exact_d2(0.172)
    st = _radial("coulomb", {"beta": 0.172}, 2, 0.5, -1).solve()
    betas = np.linspace(0.01, 0.5, 50)
    worst = max(abs(coulomb_exact_d2(b).quadratic_residual()) for b in betas)
    return {"E_closed_form": ex.E, "quadratic_residual": worst,
            "solver_minus_closed_form": st.E - ex.E}


def sine_lobe_areas(beta: float = 1.64, count: int = 20) -> list[float]:
    """|int sin z / z| over [beta, pi], [pi, 2 pi], ... (count lobes)."""
    zeros = [beta] + [k * math.pi for k in range(1, count + 1)]
    res = quad_oscillatory(lambda z: math.sin(z) / z, zeros,
                           QuadratureConfig(abs_tol=1e-14, rel_tol=1e-13))
    return res.lobes


def _sine_lobes():
    lobes = sine_lobe_areas(1.64, 20)
    strictly = all(a > b for a, b in zip(lobes[:-1], lobes[1:]))
    pa = Problem(PotentialSpec("harmonic", {"a": 0.5}), 1.2)
    pb = Problem(PotentialSpec("sine_modulated_harmonic", {"b": 0.5, "beta": 1.64}), 1.2)
    area = corollary_area_check(pa.potential, pb.potential,
                                detect_crossings(pa.potential, pb.potential, (0.0, 6.0)))
    return {"lobe_1": lobes[0], "lobe_2": lobes[1], "first_20_strictly_decreasing": strictly,
            "x_lobe_1_scaled": area.lobes[0] * 3 / 0.5,
            "n_intersection_positive": area.verdict == "positive"}


def _sici_lobe(a, b):
    return abs(special.sici(b)[0] - special.sici(a)[0])


REGISTRY: dict[str, ExperimentRecord] = {}


def _register(rec: ExperimentRecord):
    if rec.id in REGISTRY:
        raise ValueError(f"duplicate registry id {rec.id}")
    REGISTRY[rec.id] = rec


_register(ExperimentRecord(
    "1d-harmonic-sine", "1D spin symmetry: harmonic vs sine-modulated harmonic, m=1.2",
    {"a": {"kind": "harmonic", "a": 0.5},
     "b": {"kind": "sine_modulated_harmonic", "b": 0.5, "beta": 1.64}, "mass": 1.2, "s": 1},
    [Expected("E_a", 1.77935, 1e-4), Expected("E_b", 1.85470, 1e-4),
     Expected("g_nonnegative", True), Expected("ordering_consistent", True)],
    _harmonic_sine))

_register(ExperimentRecord(
    "d5-softcore-sech2", "d=5, common Coulomb scalar 0.7/r: soft-core vs sech^2 (T3)",
    {"a": {"kind": "softcore", "alpha": 0.8, "a": 1.6, "q": 3},
     "b": {"kind": "sech_squared", "beta": 0.5, "b": 0.31},
     "scalar": {"kind": "coulomb", "beta": 0.7}, "mass": 1.0, "d": 5, "j": 0.5, "tau": -1},
    [Expected("E_a", 0.77260, 1e-4), Expected("E_b", 0.81648, 1e-4),
     Expected("T3_ordering", True)],
    _softcore_sech))

_register(ExperimentRecord(
    "fig2-left", "cut-off Coulomb v=1.5, a=0.01; d=4, j=1/2, tau=+1, S=V",
    {"V": {"kind": "cutoff_coulomb", "v": 1.5, "a": 0.01}, "mass": 1.0, "d": 4, "j": 0.5,
     "tau": 1, "s": 1},
    [Expected("E", 0.47399, 1e-4), Expected("has_node", True)],
    _fig2_left))

_register(ExperimentRecord(
    "fig2-right", "cut-off Coulomb v=2.5, a=1.2; d=7, j=5/2, tau=-1, S=V",
    {"V": {"kind": "cutoff_coulomb", "v": 2.5, "a": 1.2}, "mass": 1.0, "d": 7, "j": 2.5,
     "tau": -1, "s": 1},
    [Expected("E", 0.69329, 1e-4), Expected("nodeless", True)],
    _fig2_right))

_register(ExperimentRecord(
    "yukawa-coulomb-c5", "d=2 Yukawa(0.2, 0.1) vs Coulomb(0.172), single crossing, mu(inf) >= 0",
    {"a": {"kind": "yukawa", **YUKAWA}, "b": {"kind": "coulomb", "beta": 0.172}, "mass": 1.0,
     "d": 2, "j": 0.5, "tau": -1, "s": 1},
    [Expected("E_a", 0.75632, 1e-4), Expected("E_b", 0.78837, 1e-4),
     Expected("crossings", 1.0, 0.0, "PAPER"), Expected("mu_infinity", 0.00006, 2e-5),
     Expected("mu_nonnegative", True), Expected("C5_ordering", True)],
    _yukawa_c5))

_register(ExperimentRecord(
    "yukawa-coulomb-lowerbound", "d=2 Yukawa(0.2, 0.1) vs Coulomb(0.201): V_a > V_b pointwise",
    {"a": {"kind": "yukawa", **YUKAWA}, "b": {"kind": "coulomb", "beta": 0.201}, "mass": 1.0,
     "d": 2, "j": 0.5, "tau": -1, "s": 1},
    [Expected("V_a_above_V_b", True), Expected("E_a_greater", True),
     Expected("E_a", 0.75632, 1e-4),
     Expected("E_b_solver_vs_closed_form", 0.0, 1e-6, "DERIVED"),
     Expected("E_b_printed", 0.70010, 1e-4, "PAPER", info_only=True)],
    _yukawa_lower,
    notes={"E_b_printed": "printed value; the closed form (1-4b^2)/(1+4b^2) and the solver "
                        "both give 0.72176, so the printed figure is recorded, not asserted"}))

_register(ExperimentRecord(
    "coulomb-exact-closedform", "exact d=2 Coulomb eigenvalue E=(1-4b^2)/(1+4b^2)",
    {"beta": 0.172, "mass": 1.0, "d": 2, "j": 0.5, "tau": -1, "s": 1},
    [Expected("E_closed_form", 0.78837, 1e-5), Expected("quadratic_residual", 0.0, 1e-12,
                                                        "DERIVED"),
     Expected("solver_minus_closed_form", 0.0, 1e-6, "DERIVED")],
    _coulomb_closed))

_register(ExperimentRecord(
    "sine-lobe-areas", "lobe areas of |sin z|/z from beta=1.64",
    {"beta": 1.64, "lobes": 20},
    [Expected("lobe_1", 0.43810, 1e-5), Expected("lobe_2", 0.43379, 1e-5),
     Expected("first_20_strictly_decreasing", True, 0.0, "PAPER"),
     Expected("x_lobe_1_scaled", _sici_lobe(1.64, math.pi), 1e-8, "DERIVED"),
     Expected("n_intersection_positive", True)],
    _sine_lobes))


def run(ids="all"):
    """[(record, checks)] in registry order."""
    if ids == "all":
        keys = list(REGISTRY)
    else:
        keys = [ids] if isinstance(ids, str) else list(ids)
        unknown = [k for k in keys if k not in REGISTRY]
        if unknown:
            raise KeyError(f"unknown experiment id(s) {unknown}; known: {list(REGISTRY)}")
        keys = [k for k in REGISTRY if k in keys]
    return [(REGISTRY[k], REGISTRY[k].run()) for k in keys]
