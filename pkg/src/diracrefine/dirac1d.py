"""
Ground states of the one-dimensional Dirac system with S = sV.

    phi1' = -(E + m - V + S) phi2,    phi2' = (E - m - V - S) phi1

For even V the components have definite and opposite parities, so the
problem is solved on the half-line with one component vanishing at x = 0.
The component phi_q (q = 1 for s = +1, q = 2 for s = -1) obeys

    -phi'' + 2 V (E + s m) phi = (E^2 - m^2) phi

and is even and node-free in the ground state.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from ._shooting import (DiracSystem, EigenvalueNotFound, SolverConfig, node_count_values,
                        rk4_defect, sampled, search_direction, solve_ground)
from .numerics import SampledFunction
from .potentials import (PotentialClass, PotentialError, PotentialSpec, SymmetryMode, classify,
                         energy_window, evaluate)


@dataclass(frozen=True)
class ParityChoice:
    """Which component is odd, i.e. vanishes at the origin."""

    which_vanishes_at_origin: int

    def __post_init__(self):
        if self.which_vanishes_at_origin not in (1, 2):
            raise ValueError("which_vanishes_at_origin must be 1 or 2")

    @property
    def even_component(self) -> int:
        return 3 - self.which_vanishes_at_origin


@dataclass
class BoundState1D:
    E: float
    phi1: SampledFunction
    phi2: SampledFunction
    nodes1: int
    nodes2: int
    norm: float
    mode: SymmetryMode
    m: float
    parity: ParityChoice
    potential_class: PotentialClass
    residual: float
    mismatch: float
    x_max: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def x(self) -> np.ndarray:
        return self.phi1.x

    def designated(self) -> SampledFunction:
        """phi_q: the component housed by the reduced equation."""
        return self.phi1 if self.mode.q == 1 else self.phi2


def _norm_half_line(x, y):
    return 2.0 * integrate.simpson(y[:, 0] ** 2 + y[:, 1] ** 2, x=x)


def _pin_origin(res, parity):
    # the odd component's value at x = 0 is only the shooting residual
    if res.x[0] == 0.0:
        res.y[0, parity.which_vanishes_at_origin - 1] = 0.0


def _solve_parity(V, mode, m, parity, window, config):
    system = DiracSystem(m, V, sfac=mode.s, vanishing=parity.which_vanishes_at_origin)
    q = mode.q

    def accept(res):
        _pin_origin(res, parity)
        return node_count_values(res.y[:, q - 1]) == 0

    res = solve_ground(system, window, search_direction(window, mode.s), accept, config,
                       scale=m, max_rejects=3)
    x, y = res.x, res.y.copy()
    y /= np.sqrt(_norm_half_line(x, y))
    imax = np.argmax(np.abs(y[:, q - 1]))
    if y[imax, q - 1] < 0:
        y = -y
    tail = np.max(np.abs(y[-1])) / np.max(np.abs(y))
    if tail > 1e-8:
        raise EigenvalueNotFound(f"wavefunction does not decay at X_max (tail ratio {tail:.2e})")
    return BoundState1D(
        E=res.E, phi1=sampled(x, y[:, 0]), phi2=sampled(x, y[:, 1]),
        nodes1=node_count_values(y[:, 0]), nodes2=node_count_values(y[:, 1]),
        norm=_norm_half_line(x, y), mode=mode, m=m, parity=parity,
        potential_class=classify(V, mode), residual=rk4_defect(system, res.E, x, y),
        mismatch=res.mismatch, x_max=res.geometry.X,
        diagnostics={"match_point": res.geometry.xm, "phase_index": res.phase_index,
                     "window": list(window)},
    )


def solve_ground_1d(V: PotentialSpec, mode: SymmetryMode, m: float,
                    parity: ParityChoice | str | None = "auto",
                    config: SolverConfig | None = None) -> BoundState1D:
    """Lowest state with a node-free phi_q, searched in the class energy window.

    With ``parity="auto"`` both parities are solved and the lower-lying one is
    returned. Raises EigenvalueNotFound when the window holds no bound state.
    """
    if m <= 0:
        raise ValueError("mass must be positive")
    if V.singular_at_origin:
        raise PotentialError(f"{V.kind} is singular at the origin; 1D needs a finite V(0)")
    config = config or SolverConfig()
    cls = classify(V, mode)
    window = energy_window(cls, mode, m)
    if parity in (None, "auto"):
        choices = [ParityChoice(1), ParityChoice(2)]
    else:
        choices = [parity if isinstance(parity, ParityChoice) else ParityChoice(int(parity))]
    found, errors = [], []
    for choice in choices:
        try:
            found.append(_solve_parity(V, mode, m, choice, window, config))
        except EigenvalueNotFound as exc:
            errors.append(str(exc))
    if not found:
        raise EigenvalueNotFound(f"no bound state in window {window}: " + "; ".join(errors))
    u = search_direction(window, mode.s)
    return min(found, key=lambda st: u * st.E)


@dataclass(frozen=True)
class ReducedProblem:
    """-phi'' + W(x) phi = lam phi with W = 2 V (E + s m), lam = E^2 - m^2."""

    effective_potential: Callable[[np.ndarray], np.ndarray]
    eigenvalue: float
    coupling: float  # 2 (E + s m)
    E: float
    m: float
    mode: SymmetryMode
    housed_component: int


def reduce_to_schrodinger_1d(V: PotentialSpec, mode: SymmetryMode, m: float,
                             E_trial: float) -> ReducedProblem:
    coupling = 2.0 * (E_trial + mode.s * m)

    def W(x):
        return coupling * evaluate(V, np.abs(np.asarray(x, dtype=float)))

    return ReducedProblem(W, E_trial ** 2 - m ** 2, coupling, E_trial, m, mode, mode.q)


def monotone_violation(values: np.ndarray) -> float:
    """Smallest relative backtrack needed to call the samples monotone."""
    v = np.asarray(values, dtype=float)
    scale = np.max(np.abs(v)) if v.size else 0.0
    if v.size < 2 or scale == 0:
        return 0.0
    d = np.diff(v)
    up = max(float(np.max(d)), 0.0)
    down = max(float(np.max(-d)), 0.0)
    return min(up, down) / scale


def check_lemma1(state: BoundState1D, mode: SymmetryMode, tol: float = 1e-9):
    """(holds, violation): phi_q is monotone on [0, X_max]."""
    f = state.phi1 if mode.q == 1 else state.phi2
    viol = monotone_violation(f.values)
    return viol <= tol, viol


def node_count(f: SampledFunction | np.ndarray) -> int:
    """Strict sign changes, ignoring samples below 1e-12 max|f|."""
    values = f.values if isinstance(f, SampledFunction) else f
    return node_count_values(values)


def full_line(state: BoundState1D):
    """(x, phi1, phi2) on [-X_max, X_max] by parity reflection."""
    x = state.x
    odd = state.parity.which_vanishes_at_origin
    s1 = -1.0 if odd == 1 else 1.0
    s2 = -1.0 if odd == 2 else 1.0
    xf = np.concatenate([-x[:0:-1], x])
    p1 = np.concatenate([s1 * state.phi1.values[:0:-1], state.phi1.values])
    p2 = np.concatenate([s2 * state.phi2.values[:0:-1], state.phi2.values])
    return xf, p1, p2
