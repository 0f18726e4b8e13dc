"""
Randomised same-class comparison pairs and the property checks run on them.

Families (strengths carry the sign that keeps both potentials in one class
for the chosen s):

    1d-class2     harmonic vs harmonic / sine-modulated harmonic
    1d-class1     sech^2, soft-core, cut-off Coulomb (finite at the origin)
    radial-class1 Yukawa, Coulomb, cut-off Coulomb, soft-core, sech^2 with s k < 0
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._numerov import NumerovConfig, reduced_energy_1d, reduced_energy_radial
from ._shooting import EigenvalueNotFound
from .diracd import check_lemma2
from .dirac1d import check_lemma1
from .numerics import NumericsError
from .potentials import PotentialSpec, SymmetryMode, classify, energy_window
from .problem import Problem
from .theorems import (_pointwise, TransformConfig, transform_g, transform_mu, transform_p,
                       transform_rho)

FAMILIES = ("1d-class2", "1d-class1", "radial-class1")


@dataclass
class PairCase:
    family: str
    a: Problem
    b: Problem


def _finite_1d(rng, sign):
    kind = str(rng.choice(["sech_squared", "softcore", "cutoff_coulomb"]))
    if kind == "sech_squared":
        p = {"beta": sign * rng.uniform(0.4, 2.5), "b": rng.uniform(0.5, 2.0)}
    elif kind == "softcore":
        p = {"alpha": sign * rng.uniform(0.4, 2.0), "a": rng.uniform(0.5, 2.0),
             "q": float(rng.integers(1, 4))}
    else:
        p = {"v": sign * rng.uniform(0.3, 1.5), "a": rng.uniform(0.5, 2.0)}
    return PotentialSpec(kind, p)


def _radial_potential(rng, sign):
    kind = str(rng.choice(["yukawa", "coulomb", "cutoff_coulomb", "softcore", "sech_squared"]))
    if kind == "yukawa":
        p = {"alpha": sign * rng.uniform(0.3, 1.2), "a": rng.uniform(0.05, 0.6)}
    elif kind == "coulomb":
        p = {"beta": sign * rng.uniform(0.2, 1.0)}
    elif kind == "cutoff_coulomb":
        p = {"v": sign * rng.uniform(0.8, 3.0), "a": rng.uniform(0.05, 1.5)}
    elif kind == "softcore":
        p = {"alpha": sign * rng.uniform(1.0, 3.0), "a": rng.uniform(0.3, 1.5),
             "q": float(rng.integers(1, 4))}
    else:
        p = {"beta": sign * rng.uniform(1.5, 5.0), "b": rng.uniform(0.3, 1.2)}
    return PotentialSpec(kind, p)


def _perturbed(rng, spec: PotentialSpec) -> PotentialSpec:
    """Same kind, every parameter nudged by up to 30 percent (q kept integral)."""
    params = {}
    for k, v in spec.params.items():
        params[k] = v if k == "q" else float(v * rng.uniform(0.7, 1.3))
    return PotentialSpec(spec.kind, params)


def random_pair(rng: np.random.Generator, s: int, family: str | None = None) -> PairCase:
    family = family or FAMILIES[int(rng.integers(len(FAMILIES)))]
    m = float(rng.uniform(0.6, 1.6))
    sign = 1.0 if s == 1 else -1.0
    if family == "1d-class2":
        a = PotentialSpec("harmonic", {"a": sign * rng.uniform(0.2, 1.5)})
        if rng.random() < 0.6:
            amp = a.params["a"] * (1.0 if rng.random() < 0.5 else rng.uniform(0.8, 1.3))
            b = PotentialSpec("sine_modulated_harmonic", {"b": amp, "beta": rng.uniform(0.0, 3.0)})
        else:
            b = PotentialSpec("harmonic", {"a": sign * rng.uniform(0.2, 1.5)})
        return PairCase(family, Problem(a, m, 1, s), Problem(b, m, 1, s))
    if family == "1d-class1":
        a = _finite_1d(rng, sign)
        b = _perturbed(rng, a) if rng.random() < 0.5 else _finite_1d(rng, sign)
        return PairCase(family, Problem(a, m, 1, s), Problem(b, m, 1, s))
    d = int(rng.integers(2, 5))
    j = 0.5 + int(rng.integers(0, 2))
    tau = -s  # s k < 0
    a = _radial_potential(rng, sign)
    b = _perturbed(rng, a) if rng.random() < 0.5 else _radial_potential(rng, sign)
    return PairCase(family, Problem(a, m, d, s, j=j, tau=tau), Problem(b, m, d, s, j=j, tau=tau))


@dataclass
class PairOutcome:
    case: PairCase
    E: tuple[float, float] | None = None
    skipped: str | None = None
    pointwise: str | None = None  # "le", "ge" or None
    transforms: dict = field(default_factory=dict)  # name -> nonnegative
    violations: list[str] = field(default_factory=list)
    lemma_ok: bool = True
    in_window: bool = True
    reduced_delta: float = 0.0


def _check_state(problem: Problem, state, outcome: PairOutcome, numerov: NumerovConfig | None):
    mode = problem.mode
    window = energy_window(classify(problem.potential, mode), mode, problem.mass)
    if not window[0] < state.E < window[1]:
        outcome.in_window = False
        outcome.violations.append(f"E={state.E} outside window {window}")
    if problem.radial:
        ok, viol = check_lemma2(state, mode)
    else:
        ok, viol = check_lemma1(state, mode)
    if not ok:
        outcome.lemma_ok = False
        outcome.violations.append(f"monotonicity violated by {viol:.3g}")
    if numerov is not None:
        if problem.radial:
            E2 = reduced_energy_radial(problem.potential, mode, problem.mass, problem.channel,
                                       state.E, window, numerov)
        else:
            E2 = reduced_energy_1d(problem.potential, mode, problem.mass, state.E, window, numerov)
        outcome.reduced_delta = max(outcome.reduced_delta, abs(E2 - state.E))


def evaluate_pair(case: PairCase, numerov: NumerovConfig | None = NumerovConfig(points=20000),
                  config: TransformConfig | None = None, order_tol: float = 1e-8) -> PairOutcome:
    """Solve both problems and test every applicable comparison criterion."""
    cfg = config or TransformConfig(points=2048)
    out = PairOutcome(case)
    try:
        sa, sb = case.a.solve(), case.b.solve()
    except (EigenvalueNotFound, NumericsError) as exc:
        out.skipped = str(exc)
        return out
    out.E = (sa.E, sb.E)
    for prob, st in ((case.a, sa), (case.b, sb)):
        _check_state(prob, st, out, numerov)
    Va, Vb = case.a.potential, case.b.potential
    mode: SymmetryMode = case.a.mode
    R = max(getattr(s, "r_max", None) or s.x_max for s in (sa, sb))
    le, ge = _pointwise(Va, Vb, R, cfg)
    out.pointwise = "le" if le else ("ge" if ge else None)
    if le and sa.E > sb.E + order_tol:
        out.violations.append(f"pointwise V_a<=V_b but E_a={sa.E} > E_b={sb.E}")
    if ge and sa.E < sb.E - order_tol:
        out.violations.append(f"pointwise V_a>=V_b but E_a={sa.E} < E_b={sb.E}")
    if case.a.radial:
        curves = {"rho": lambda: transform_rho(Va, Vb, mode, case.a.channel, R, cfg),
                  "mu_a": lambda: transform_mu(Va, Vb, sa, mode, case.a.channel, cfg),
                  "mu_b": lambda: transform_mu(Va, Vb, sb, mode, case.a.channel, cfg)}
    else:
        curves = {"g": lambda: transform_g(Va, Vb, R, cfg),
                  "p_a": lambda: transform_p(Va, Vb, sa, mode, cfg),
                  "p_b": lambda: transform_p(Va, Vb, sb, mode, cfg)}
    for name, build in curves.items():
        nonneg = build().nonnegative
        out.transforms[name] = nonneg
        if name in ("g", "rho") and le and not nonneg:
            out.violations.append(f"pointwise V_a<=V_b but {name} is not nonnegative")
        if nonneg and sa.E > sb.E + order_tol:
            out.violations.append(f"{name} >= 0 but E_a={sa.E} > E_b={sb.E}")
    return out


def sweep(s: int, count: int, seed: int, numerov: NumerovConfig | None = NumerovConfig(points=20000)
          ) -> list[PairOutcome]:
    """``count`` solved pairs (pairs without a bound state are replaced)."""
    rng = np.random.default_rng(seed)
    done: list[PairOutcome] = []
    attempts = 0
    while len(done) < count:
        attempts += 1
        if attempts > 4 * count:
            raise RuntimeError("too many pairs without bound states")
        family = FAMILIES[len(done) % len(FAMILIES)]
        res = evaluate_pair(random_pair(rng, s, family), numerov)
        if res.skipped is None:
            done.append(res)
    return done


def summarize(outcomes: list[PairOutcome]) -> dict:
    n = len(outcomes)
    return {
        "pairs": n,
        "pointwise_ordered": sum(o.pointwise is not None for o in outcomes),
        "refined_hypothesis_met": sum(any(o.transforms.values()) and o.pointwise is None
                                      for o in outcomes),
        "violations": sum(bool(o.violations) for o in outcomes),
        "lemma_failures": sum(not o.lemma_ok for o in outcomes),
        "window_failures": sum(not o.in_window for o in outcomes),
        "max_reduced_delta": max((o.reduced_delta for o in outcomes), default=0.0),
        "families": {f: sum(o.case.family == f for o in outcomes) for f in FAMILIES},
    }
