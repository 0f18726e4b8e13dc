"""
Bottom-of-channel states of the radial Dirac system in d > 1 dimensions.

    psi1' = (m + E + S - V) psi2 - (k/r) psi1
    psi2' = (m - E + S + V) psi1 + (k/r) psi2,      k = tau (j + (d - 2)/2)

S is either sV (spin / pseudo-spin symmetry) or an independent catalog
potential. The outward integration starts from the two-term Frobenius series
at r0 = 1e-6 times the length scale of the well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate

from ._shooting import (DiracSystem, EigenvalueNotFound, SolverConfig, node_count_values,
                        rk4_defect, sampled, search_direction, solve_ground)
from .dirac1d import monotone_violation
from .numerics import SampledFunction
from .potentials import (PotentialClass, PotentialSpec, SymmetryMode, classify, energy_window,
                         evaluate)


@dataclass(frozen=True)
class Channel:
    d: int
    j: float
    tau: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError("dimension d must be an integer >= 2")
        twice = Fraction(self.j).limit_denominator(8) * 2
        if twice.denominator != 1 or twice.numerator % 2 != 1 or self.j <= 0:
            raise ValueError(f"j must be a positive half-integer, got {self.j}")
        if self.tau not in (1, -1):
            raise ValueError("tau must be +1 or -1")

    @property
    def k(self) -> float:
        return kd(self)


def kd(channel: Channel) -> float:
    return channel.tau * (channel.j + (channel.d - 2) / 2.0)


@dataclass
class BoundStateRadial:
    E: float
    psi1: SampledFunction
    psi2: SampledFunction
    nodes1: int
    nodes2: int
    norm: float
    channel: Channel
    m: float
    mode: SymmetryMode | None  # None for an independent scalar potential
    potential_class: PotentialClass | None
    residual: float
    mismatch: float
    r_max: float
    gamma: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def r(self) -> np.ndarray:
        return self.psi1.x


def _nodeless(res):
    return node_count_values(res.y[:, 0]) == 0 and node_count_values(res.y[:, 1]) == 0


def solve_ground_radial(V: PotentialSpec, S: PotentialSpec | SymmetryMode, m: float,
                        channel: Channel, config: SolverConfig | None = None,
                        require_nodeless: bool | None = None) -> BoundStateRadial:
    """Lowest state of the channel.

    ``S`` is a SymmetryMode (S = sV) or an explicit scalar potential. With
    S = sV the search runs in order of increasing sE inside the class window.
    When s k < 0 the accepted state must be node-free in both components; for
    s k > 0 a node is unavoidable and the first root is returned. An
    explicit scalar uses the window (-m, m) and accepts the lowest E whose
    components are both node-free.
    """
    if m <= 0:
        raise ValueError("mass must be positive")
    config = config or SolverConfig()
    k = kd(channel)
    if isinstance(S, SymmetryMode):
        mode = S
        cls = classify(V, mode)
        window = energy_window(cls, mode, m)
        system = DiracSystem(m, V, sfac=mode.s, k=k, radial=True)
        u_sign = search_direction(window, mode.s)
        nodeless = (mode.s * k < 0) if require_nodeless is None else require_nodeless
    else:
        mode, cls = None, None
        window = (-m, m)
        system = DiracSystem(m, V, S=S, k=k, radial=True)
        u_sign = 1
        nodeless = True if require_nodeless is None else require_nodeless
    accept = _nodeless if nodeless else (lambda res: True)
    res = solve_ground(system, window, u_sign, accept, config, scale=m,
                       max_rejects=3 if mode is not None else None)

    r, y = res.x, res.y.copy()
    y /= math.sqrt(integrate.simpson(y[:, 0] ** 2 + y[:, 1] ** 2, x=r))
    lead = 0 if mode is None or mode.q == 1 else 1
    if y[np.argmax(np.abs(y[:, lead])), lead] < 0:
        y = -y
    tail = np.max(np.abs(y[-1])) / np.max(np.abs(y))
    if tail > 1e-8:
        raise EigenvalueNotFound(f"wavefunction does not decay at R_max (tail ratio {tail:.2e})")
    gamma = system.indicial()[0]
    return BoundStateRadial(
        E=res.E, psi1=sampled(r, y[:, 0]), psi2=sampled(r, y[:, 1]),
        nodes1=node_count_values(y[:, 0]), nodes2=node_count_values(y[:, 1]),
        norm=float(integrate.simpson(y[:, 0] ** 2 + y[:, 1] ** 2, x=r)), channel=channel,
        m=m, mode=mode, potential_class=cls, residual=rk4_defect(system, res.E, r, y),
        mismatch=res.mismatch, r_max=res.geometry.X, gamma=gamma,
        diagnostics={"match_point": res.geometry.xm, "r0": res.geometry.x0,
                     "phase_index": res.phase_index, "window": list(window)},
    )


# ---------------------------------------------------------------------------
# exact d = 2 Coulomb reference
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoulombExact:
    """V = S = -beta/r, m = 1, d = 2, j = 1/2, tau = -1 (k = -1/2).

    E solves E^2 - 1 = -(2 beta (E + 1))^2 and the large component is
    psi1 = sqrt(r) exp(-r sqrt(1 - E^2)) (unnormalised).
    """

    beta: float
    E: float

    @property
    def decay(self) -> float:
        return math.sqrt(1.0 - self.E ** 2)

    def psi(self, r):
        r = np.asarray(r, dtype=float)
        return np.sqrt(r) * np.exp(-r * self.decay)

    __call__ = psi

    def quadratic_residual(self) -> float:
        E = self.E
        return E * E - 1.0 + (2.0 * self.beta * (E + 1.0)) ** 2

    @property
    def channel(self) -> Channel:
        return Channel(2, 0.5, -1)

    @property
    def potential(self) -> PotentialSpec:
        return PotentialSpec("coulomb", {"beta": self.beta})


def coulomb_exact_d2(beta: float) -> CoulombExact:
    if not 0.0 < beta <= 0.5:
        raise ValueError("exact d=2 Coulomb state requires 0 < beta <= 1/2")
    b2 = 4.0 * beta * beta
    return CoulombExact(beta, (1.0 - b2) / (1.0 + b2))


# ---------------------------------------------------------------------------
# Schroedinger reduction, monotonicity, node structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReducedRadialProblem:
    """-psi'' + (c/r^2 + 2 (E + s m) V) psi = lam psi, c = k (k + s), lam = E^2 - m^2."""

    effective_potential: Callable[[np.ndarray], np.ndarray]
    centrifugal: float
    coupling: float
    eigenvalue: float
    E: float
    m: float
    k: float
    mode: SymmetryMode

    @property
    def gamma(self) -> float:
        """Positive indicial root of gamma (gamma - 1) = c."""
        return 0.5 + math.sqrt(0.25 + self.centrifugal)


def reduce_to_schrodinger_radial(V: PotentialSpec, mode: SymmetryMode | PotentialSpec, m: float,
                                 channel: Channel, E_trial: float) -> ReducedRadialProblem:
    if not isinstance(mode, SymmetryMode):
        raise ValueError("the Schroedinger reduction is defined only for S = sV")
    k = kd(channel)
    cent = k * (k + mode.s)
    coupling = 2.0 * (E_trial + mode.s * m)

    def W(r):
        r = np.asarray(r, dtype=float)
        return cent / r ** 2 + coupling * evaluate(V, r)

    return ReducedRadialProblem(W, cent, coupling, E_trial ** 2 - m ** 2, E_trial, m, k, mode)


def lemma2_function(state: BoundStateRadial, mode: SymmetryMode) -> np.ndarray:
    r = state.r
    k = kd(state.channel)
    if mode.s == 1:
        return state.psi1.values * r ** k
    return state.psi2.values * r ** (-k)


def check_lemma2(state: BoundStateRadial, mode: SymmetryMode, tol: float = 1e-9):
    """(holds, violation): psi1 r^k (s=+1) or psi2 r^-k (s=-1) is monotone."""
    viol = monotone_violation(lemma2_function(state, mode))
    return viol <= tol, viol


@dataclass(frozen=True)
class NodeReport:
    nodes1: int
    nodes2: int
    sk_sign: int
    nodeless_expected: bool

    @property
    def mismatch(self) -> bool:
        nodeless = self.nodes1 == 0 and self.nodes2 == 0
        return self.nodeless_expected and not nodeless

    def to_dict(self) -> dict:
        return {"nodes1": self.nodes1, "nodes2": self.nodes2, "sk_sign": self.sk_sign,
                "nodeless_expected": self.nodeless_expected, "mismatch": self.mismatch}


def node_structure(state: BoundStateRadial, mode: SymmetryMode) -> NodeReport:
    sk = mode.s * kd(state.channel)
    return NodeReport(state.nodes1, state.nodes2, int(np.sign(sk)), sk < 0)
