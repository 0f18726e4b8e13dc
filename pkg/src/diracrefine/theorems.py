"""
Refined comparison criteria.

Two problems a and b share mass, symmetry and channel. With h = V_b - V_a,
the eigenvalues satisfy E_a <= E_b when one of these cumulative transforms
stays nonnegative on [0, inf):

    g(x)   = int_0^x h dt                            (1D)
    p(x)   = int_0^x h |phi_l| dt                    (1D, phi_l = phi_q of a or b)
    rho(r) = int_0^r h t^(-2 s k) dt                 (d > 1, s k < 0)
    mu(r)  = int_0^r h |psi_l| t^(-s k) dt           (d > 1, s k < 0)

and when S_a = S_b with V_a <= V_b pointwise. The criteria are one-directional:
a failed hypothesis is inconclusive, never a counterexample.

Transforms are integrated on a dense grid (crossings inserted as nodes,
Gauss-Legendre per interval). Beyond the last grid point the remaining
integral is bounded by following the zeros of the integrand lobe by lobe,
then treating a constant-sign remainder with an improper quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import optimize
from scipy.interpolate import CubicSpline

from .diracd import BoundStateRadial, Channel, CoulombExact, kd
from .dirac1d import BoundState1D
from .numerics import (Grid, NonDecayingTailError, QuadratureConfig, QuadratureError,
                       SampledFunction, _accelerate, _quad_finite, quad_adaptive)
from .potentials import PotentialSpec, SymmetryMode, potential_array, potential_value

THEOREMS = ("basic", "T1", "T2", "T3", "T4", "T5", "C1", "C2", "C4", "C5", "n-intersection")


class SelectorError(ValueError):
    """Weight built from the wrong wavefunction component."""


class HypothesisError(ValueError):
    """A transform was requested outside its domain of validity."""


@dataclass(frozen=True)
class TransformConfig:
    points: int = 4096
    gauss_order: int = 16
    r_max: float = 40.0
    threshold: float = 1e-12
    max_lobes: int = 400
    tail_reach: float = 64.0  # the zero search stops at tail_reach * R
    order_tol: float = 1e-8
    quadrature: QuadratureConfig = field(default_factory=lambda: QuadratureConfig(
        abs_tol=1e-13, rel_tol=1e-11))


# ---------------------------------------------------------------------------
# integrands
# ---------------------------------------------------------------------------


class _Potential:
    """Fast scalar / array evaluation of a catalog potential at r > 0."""

    def __init__(self, spec: PotentialSpec):
        self.spec = spec
        self._packed = spec.packed()

    def __call__(self, r):
        if np.ndim(r) == 0:
            return potential_value(*self._packed, float(r))
        arr = np.ascontiguousarray(r, dtype=float)
        return potential_array(*self._packed, arr.ravel()).reshape(arr.shape)


def _difference(Va: PotentialSpec, Vb: PotentialSpec):
    fa, fb = _Potential(Va), _Potential(Vb)

    def h(r):
        return fb(r) - fa(r)

    return h


@dataclass(frozen=True)
class Weight:
    """Positive weight multiplying V_b - V_a.

    kind: none | wavefunction | power | wavefunction_power. ``function``
    evaluates |phi| or |psi|; ``support`` is where a sampled wavefunction
    ends (the weight is taken as zero beyond it).
    """

    kind: str = "none"
    exponent: float = 0.0
    function: Callable | None = None
    support: float = math.inf

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        w = np.ones_like(x)
        if self.exponent != 0.0:
            w = w * x ** self.exponent
        if self.function is not None:
            w = w * np.abs(self.function(x))
        return w if w.ndim else float(w)

    def describe(self) -> str:
        return {"none": "1", "wavefunction": "|wavefunction|",
                "power": f"r^{self.exponent:g}",
                "wavefunction_power": f"|wavefunction|*r^{self.exponent:g}"}[self.kind]


def _spline_abs(f: SampledFunction):
    x, v = f.x, f.values
    spline = CubicSpline(x, v)
    lo, hi = x[0], x[-1]

    def evaluate(t):
        t = np.asarray(t, dtype=float)
        out = np.where((t >= lo) & (t <= hi), np.abs(spline(np.clip(t, lo, hi))), 0.0)
        return out if out.ndim else float(out)

    return evaluate


@dataclass
class TransformCurve:
    which: str
    curve: SampledFunction
    min_value: float
    nonnegative: bool
    weight: Weight
    tail_bound: float
    final_value: float
    scale: float
    extrapolated: bool = False
    crossings: list[float] = field(default_factory=list)

    @property
    def argmin(self) -> float:
        return float(self.curve.x[int(np.argmin(self.curve.values))])

    def summary(self) -> dict:
        return {"which": self.which, "weight": self.weight.describe(),
                "min_value": self.min_value, "nonnegative": bool(self.nonnegative),
                "final_value": self.final_value, "tail_bound": self.tail_bound,
                "scale": self.scale, "extrapolated": self.extrapolated,
                "x_max": float(self.curve.x[-1]), "crossings": len(self.crossings)}


def _gauss_segments(f, edges, order):
    nodes, weights = leggauss(order)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    pts = (0.5 * (a + b))[:, None] + half[:, None] * nodes[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
    seg = (vals * weights).sum(axis=1) * half
    abs_seg = (np.abs(vals) * weights).sum(axis=1) * half
    return seg, abs_seg


def _dense_grid(lo, R, n, extra=()):
    base = np.linspace(lo, R, n)
    near = R * np.geomspace(1e-9, 1.0, max(n // 8, 16)) if lo == 0.0 else np.empty(0)
    pts = np.concatenate([base, near, np.asarray(extra, dtype=float)])
    pts = np.unique(pts[(pts >= lo) & (pts <= R)])
    return pts


def _refine_zeros(f, xs, vals):
    keep = np.flatnonzero(np.isfinite(vals) & (vals != 0.0))
    s = np.sign(vals[keep])
    flips = np.flatnonzero(s[:-1] != s[1:])
    out = []
    for i in flips:
        lo, hi = xs[keep[i]], xs[keep[i + 1]]
        out.append(optimize.brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16))
    return out


def _zero_stream(f, start, gap, far, max_count) -> Iterator[float]:
    """Successive sign changes of f beyond ``start``.

    Marches with a step of a fraction of the last zero spacing, growing the
    step geometrically while no zero shows up; stops past ``far``.
    """
    x = start
    fx = f(x)
    base = gap / 8.0
    step = base
    count = 0
    last = start
    while count < max_count and x < far:
        xn = x + step
        fn = f(xn)
        if fx != 0.0 and fn != 0.0 and (fx > 0) != (fn > 0):
            z = optimize.brentq(f, x, xn, xtol=1e-14, rtol=8.9e-16)
            yield z
            count += 1
            if z > last:
                base = max((z - last) / 8.0, 1e-12 * z)
            last = z
            step = base
        else:
            step *= 1.5
        if fn != 0.0:
            fx = fn
        x = xn


@dataclass
class _Tail:
    inf: float  # inf_{x >= R} int_R^x
    total: float  # int_R^inf (may be +-inf)
    bound: float
    extrapolated: bool
    lobes: list[float]


def _constant_sign_rest(f, start, quad_cfg):
    probe = start * np.geomspace(1.0 + 1e-9, 1e3, 64) + 1e-12
    vals = np.array([f(t) for t in probe])
    positive = np.all(vals >= 0)
    try:
        total = quad_adaptive(f, start, math.inf, quad_cfg)
    except (NonDecayingTailError, QuadratureError):
        total = math.inf if positive else -math.inf
    if positive:
        return 0.0, total
    return min(total, 0.0), total


def _tail(f, R, gap, cfg: TransformConfig) -> _Tail:
    """Bound the integral of f beyond R."""
    zeros = list(_zero_stream(f, R, gap, cfg.tail_reach * R, cfg.max_lobes))
    edges = [R] + zeros
    signed = [_quad_finite(f, a, b, cfg.quadrature) for a, b in zip(edges[:-1], edges[1:])]
    partial = np.concatenate([[0.0], np.cumsum(signed)])
    lobes = [abs(v) for v in signed[1:]]
    if len(zeros) >= cfg.max_lobes:
        tail_lobes = lobes[-32:]
        decreasing = all(a >= b for a, b in zip(tail_lobes[:-1], tail_lobes[1:]))
        alternating = all(s1 * s2 < 0 for s1, s2 in zip(signed[1:-1], signed[2:]))
        if not (decreasing and alternating):
            return _Tail(-math.inf, math.nan, math.inf, True, lobes)
        value, _ = _accelerate(partial[-64:])
        last = lobes[-1]
        inf = min(float(partial.min()), float(partial[-1]) - last, 0.0)
        return _Tail(inf, value, abs(float(partial[-1])) + last, True, lobes)
    start = edges[-1]
    rest_inf, rest_total = _constant_sign_rest(f, start, cfg.quadrature)
    inf = min(float(partial.min()), float(partial[-1]) + rest_inf, 0.0)
    total = float(partial[-1]) + rest_total
    bound = max(abs(float(partial.min())), abs(total)) if math.isfinite(total) else math.inf
    return _Tail(inf, total, bound, False, lobes)


def _transform(which, h, weight: Weight, R, cfg: TransformConfig, origin_singular=False):
    if origin_singular:
        raise QuadratureError(f"{which}: the transform diverges at the origin")

    def integrand(x):
        return h(x) * weight(x)

    R = min(R, weight.support)
    probe = _dense_grid(0.0, R, cfg.points)[1:]
    hv = np.asarray(h(probe), dtype=float)
    crossings = _refine_zeros(h, probe, hv)
    grid = _dense_grid(0.0, R, cfg.points, crossings)
    seg, abs_seg = _gauss_segments(integrand, grid, cfg.gauss_order)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    scale = float(abs_seg.sum())
    gap = (crossings[-1] - crossings[-2]) if len(crossings) >= 2 else R / 16.0
    if math.isfinite(weight.support):
        tail = _Tail(0.0, 0.0, 0.0, False, [])
    else:
        tail = _tail(integrand, R, gap, cfg)
    min_value = min(float(cum.min()), float(cum[-1]) + tail.inf)
    final = float(cum[-1]) + tail.total
    nonneg = min_value >= -cfg.threshold * max(scale, 1e-300) or (scale == 0.0 and min_value >= 0)
    return TransformCurve(which, SampledFunction(Grid(grid), cum), min_value, bool(nonneg),
                          weight, tail.bound, final, scale, tail.extrapolated, list(crossings))


def _singular(Va, Vb, exponent):
    c = Vb.coulomb_coefficient - Va.coulomb_coefficient
    return c != 0.0 and exponent <= 0.0


# ---------------------------------------------------------------------------
# the four transforms
# ---------------------------------------------------------------------------


def transform_g(Va: PotentialSpec, Vb: PotentialSpec, X_max: float | None = None,
                config: TransformConfig | None = None) -> TransformCurve:
    cfg = config or TransformConfig()
    R = X_max or cfg.r_max
    return _transform("g", _difference(Va, Vb), Weight("none"), R, cfg,
                      _singular(Va, Vb, 0.0))


def _component_weight(state_or_fn, mode: SymmetryMode, component, radial: bool):
    """Designated component of a state (or a validated sampled function / closure)."""
    name = "psi" if radial else "phi"
    if isinstance(state_or_fn, (BoundState1D, BoundStateRadial)):
        if state_or_fn.mode is not None and state_or_fn.mode.s != mode.s:
            raise SelectorError("state was solved under a different symmetry mode")
        if component is not None and component != mode.q:
            raise SelectorError(f"weight must use {name}_{mode.q} for s={mode.s}, "
                                f"got {name}_{component}")
        if radial:
            f = state_or_fn.psi1 if mode.q == 1 else state_or_fn.psi2
        else:
            f = state_or_fn.phi1 if mode.q == 1 else state_or_fn.phi2
        return _spline_abs(f), float(f.x[-1])
    if isinstance(state_or_fn, CoulombExact):
        if mode.s != 1 or (component not in (None, 1)):
            raise SelectorError("the exact Coulomb closure is psi_1 of an s=+1 problem")
        return state_or_fn.psi, math.inf
    if component is not None and component != mode.q:
        raise SelectorError(f"weight must use {name}_{mode.q} for s={mode.s}, "
                            f"got {name}_{component}")
    if isinstance(state_or_fn, SampledFunction):
        return _spline_abs(state_or_fn), float(state_or_fn.x[-1])
    if callable(state_or_fn):
        return state_or_fn, math.inf
    raise TypeError("weight source must be a bound state, SampledFunction or callable")


def transform_p(Va: PotentialSpec, Vb: PotentialSpec, phi_l, mode: SymmetryMode,
                config: TransformConfig | None = None, component: int | None = None
                ) -> TransformCurve:
    """p(x) = int_0^x h |phi_l|; ``component`` names the supplied component."""
    cfg = config or TransformConfig()
    fn, support = _component_weight(phi_l, mode, component, radial=False)
    R = support if math.isfinite(support) else cfg.r_max
    return _transform("p", _difference(Va, Vb), Weight("wavefunction", 0.0, fn, support), R,
                      cfg, _singular(Va, Vb, 0.0))


def _require_sk_negative(mode, channel):
    k = kd(channel)
    if mode.s * k >= 0:
        raise HypothesisError(f"transform requires s*k_d < 0 (s={mode.s}, k_d={k:g})")
    return k


def transform_rho(Va: PotentialSpec, Vb: PotentialSpec, mode: SymmetryMode, channel: Channel,
                  R_max: float | None = None, config: TransformConfig | None = None
                  ) -> TransformCurve:
    cfg = config or TransformConfig()
    k = _require_sk_negative(mode, channel)
    expo = -2.0 * mode.s * k
    return _transform("rho", _difference(Va, Vb), Weight("power", expo), R_max or cfg.r_max,
                      cfg, _singular(Va, Vb, expo))


def transform_mu(Va: PotentialSpec, Vb: PotentialSpec, psi_l, mode: SymmetryMode,
                 channel: Channel, config: TransformConfig | None = None,
                 component: int | None = None, R_max: float | None = None) -> TransformCurve:
    cfg = config or TransformConfig()
    k = _require_sk_negative(mode, channel)
    fn, support = _component_weight(psi_l, mode, component, radial=True)
    R = support if math.isfinite(support) else (R_max or cfg.r_max)
    weight = Weight("wavefunction_power", -mode.s * k, fn, support)
    return _transform("mu", _difference(Va, Vb), weight, R, cfg, False)


# ---------------------------------------------------------------------------
# crossings and corollary area sequences
# ---------------------------------------------------------------------------


@dataclass
class CrossingSet:
    points: list[float]
    ordered_first_interval: bool
    domain: tuple[float, float] = (0.0, math.inf)

    @property
    def count(self) -> int:
        return len(self.points)

    n = count


def detect_crossings(Va: PotentialSpec, Vb: PotentialSpec, domain: tuple[float, float],
                     config: TransformConfig | None = None) -> CrossingSet:
    """Verified sign changes of V_b - V_a on the domain; V_a <= V_b on [0, x_1] checked."""
    cfg = config or TransformConfig()
    lo, hi = float(domain[0]), float(domain[1])
    h = _difference(Va, Vb)
    xs = _dense_grid(lo, hi, 4 * cfg.points)
    xs = xs[xs > 0]
    vals = np.asarray(h(xs), dtype=float)
    points = _refine_zeros(h, xs, vals)
    end = points[0] if points else hi
    first = xs[xs <= end]
    hv = np.asarray(h(first), dtype=float) if first.size else np.zeros(1)
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    ordered = bool(np.all(hv >= -1e-14 * scale))
    return CrossingSet(points, ordered, (lo, hi))


@dataclass
class AreaCheck:
    lobes: list[float]
    nonincreasing: bool
    tail_area: float
    verdict: str  # "positive" or "inconclusive"
    reason: str
    extrapolated: bool
    crossings: int

    def summary(self, limit: int = 12) -> dict:
        return {"lobes": self.lobes[:limit], "lobe_count": len(self.lobes),
                "nonincreasing": self.nonincreasing, "tail_area": self.tail_area,
                "verdict": self.verdict, "reason": self.reason,
                "extrapolated": self.extrapolated, "crossings": self.crossings}


def corollary_area_check(Va: PotentialSpec, Vb: PotentialSpec, crossings: CrossingSet,
                         weight: Weight | None = None,
                         config: TransformConfig | None = None) -> AreaCheck:
    """Absolute weighted areas between consecutive crossings, starting at 0.

    Positive verdict when the areas never increase (for an odd number of
    crossings the last one must also dominate the remaining tail), which
    makes the corresponding transform nonnegative on [0, inf).
    """
    cfg = config or TransformConfig()
    weight = weight or Weight("none")
    h = _difference(Va, Vb)

    def f(x):
        return h(x) * weight(x)

    n = crossings.count
    if not crossings.ordered_first_interval:
        return AreaCheck([], False, math.nan, "inconclusive",
                         "V_a <= V_b fails on the first interval", False, n)
    if weight.exponent <= 0 and _singular(Va, Vb, 0.0) and weight.function is None:
        raise QuadratureError("area sequence diverges at the origin")
    qc = cfg.quadrature
    edges = [0.0] + list(crossings.points)
    signed = [_quad_finite(f, a, b, qc) for a, b in zip(edges[:-1], edges[1:])]
    extrapolated = False
    tail_area = 0.0
    if n == 0:
        rest_inf, rest_total = _constant_sign_rest(f, crossings.domain[1], qc)
        ok = rest_inf >= 0
        return AreaCheck([], True, rest_total, "positive" if ok else "inconclusive",
                         "no crossing: pointwise ordered" if ok else "tail turns negative",
                         False, 0)
    start = edges[-1]
    gap = (edges[-1] - edges[-2]) if len(edges) >= 2 else start
    if math.isfinite(weight.support) and start >= weight.support:
        more = []
    else:
        far = min(cfg.tail_reach * start, weight.support)
        more = list(_zero_stream(f, start * (1 + 1e-12), gap, far, cfg.max_lobes))
    if more:
        ext = [start] + more
        signed += [_quad_finite(f, a, b, qc) for a, b in zip(ext[:-1], ext[1:])]
    total_crossings = n + len(more)
    lobes = [abs(v) for v in signed]
    scale = max(lobes) if lobes else 0.0
    nonincreasing = all(a >= b - cfg.threshold * scale for a, b in zip(lobes[:-1], lobes[1:]))
    alternating = all(s1 * s2 <= 0 for s1, s2 in zip(signed[:-1], signed[1:]))
    if len(more) >= cfg.max_lobes:
        extrapolated = True
        tail_area = lobes[-1]
        ok = nonincreasing and alternating
        reason = "nonincreasing lobes; remainder bounded by the alternating series"
    else:
        last = total_crossings and ([0.0] + list(crossings.points) + more)[-1]
        _, rest_total = _constant_sign_rest(f, last, qc)
        tail_area = abs(rest_total)
        ok = nonincreasing and alternating
        reason = "nonincreasing lobes"
        if total_crossings % 2 == 1:
            ok = ok and lobes[-1] >= tail_area
            reason += "; last lobe dominates the tail" if ok else "; tail exceeds last lobe"
    if not nonincreasing:
        reason = "lobe areas increase"
    return AreaCheck(lobes, nonincreasing, tail_area, "positive" if ok else "inconclusive",
                     reason, extrapolated, total_crossings)


# ---------------------------------------------------------------------------
# comparison driver
# ---------------------------------------------------------------------------


class IncompatibleProblems(ValueError):
    """The two problems differ in mass, symmetry, dimension or channel."""


@dataclass
class ComparisonReport:
    theorem_applied: str | None
    hypothesis_satisfied: bool
    predicted: str  # "E_a<=E_b", "E_a>=E_b" or "inconclusive"
    verified: tuple[float, float]
    consistent: bool
    details: dict = field(default_factory=dict)

    @property
    def falsified(self) -> bool:
        return not self.consistent

    def to_dict(self) -> dict:
        return {"theorem_applied": self.theorem_applied,
                "hypothesis_satisfied": bool(self.hypothesis_satisfied),
                "predicted": self.predicted,
                "verified": {"E_a": self.verified[0], "E_b": self.verified[1]},
                "consistent": bool(self.consistent), "details": self.details}


def check_compatible(pa, pb):
    if pa.mass != pb.mass:
        raise IncompatibleProblems(f"masses differ ({pa.mass} vs {pb.mass})")
    if pa.dimension != pb.dimension:
        raise IncompatibleProblems(f"dimensions differ ({pa.dimension} vs {pb.dimension})")
    if pa.symmetry != pb.symmetry:
        raise IncompatibleProblems("symmetry settings differ")
    if (pa.scalar is None) != (pb.scalar is None):
        raise IncompatibleProblems("one problem has an explicit scalar, the other S = sV")
    if pa.dimension > 1 and (pa.j, pa.tau) != (pb.j, pb.tau):
        raise IncompatibleProblems("channels (j, tau) differ")


def exact_coulomb_for(problem) -> CoulombExact | None:
    """The closed-form state when ``problem`` is the d=2 Coulomb case it covers."""
    if (problem.potential.kind == "coulomb" and problem.dimension == 2 and problem.j == 0.5
            and problem.tau == -1 and problem.mass == 1.0 and problem.symmetry == 1):
        beta = problem.potential.params["beta"]
        if 0.0 < beta <= 0.5:
            from .diracd import coulomb_exact_d2
            return coulomb_exact_d2(beta)
    return None


def _pointwise(Va, Vb, R, cfg):
    h = _difference(Va, Vb)
    xs = _dense_grid(0.0, R, 4 * cfg.points)
    xs = np.concatenate([xs[xs > 0], R * np.geomspace(1.0, 1e4, 512)])
    vals = np.asarray(h(xs), dtype=float)
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    tol = 1e-14 * scale
    return bool(np.all(vals >= -tol)), bool(np.all(vals <= tol))


def _label(family, area: AreaCheck | None):
    corollary = {"T1": "C1", "T2": "C2", "T4": "C4", "T5": "C5"}[family]
    if area is not None and area.verdict == "positive":
        if area.extrapolated or area.crossings >= 3:
            return "n-intersection"
        return corollary if area.crossings >= 1 else family
    return family


def _refined(family, pa, pb, states, R, cfg):
    Va, Vb = pa.potential, pb.potential
    mode = pa.mode
    if family in ("T4", "T5"):
        if mode.s * kd(pa.channel) >= 0:
            return None, {"skipped": f"{family} needs s*k_d < 0"}
    if family == "T1":
        curve = transform_g(Va, Vb, R, cfg)
        weight = Weight("none")
    elif family == "T2":
        curve = transform_p(Va, Vb, states[0], mode, cfg)
        weight = curve.weight
    elif family == "T4":
        curve = transform_rho(Va, Vb, mode, pa.channel, R, cfg)
        weight = curve.weight
    else:
        source = exact_coulomb_for(pb) or exact_coulomb_for(pa)
        label = "exact Coulomb psi" if source is not None else "state a"
        curve = transform_mu(Va, Vb, source if source is not None else states[0], mode,
                             pa.channel, cfg, R_max=R)
        weight = curve.weight
    domain_end = min(R, weight.support)
    crossings = detect_crossings(Va, Vb, (0.0, domain_end), cfg)
    area = corollary_area_check(Va, Vb, crossings, weight, cfg)
    satisfied = curve.nonnegative or area.verdict == "positive"
    details = {"transform": curve.summary(), "area_check": area.summary(),
               "crossing_points": crossings.points[:12]}
    if family == "T5":
        details["weight_source"] = label
    return (_label(family, area) if satisfied else None), details


_FAMILY = {"basic": "basic", "T3": "basic", "T1": "T1", "C1": "T1", "T2": "T2", "C2": "T2",
           "T4": "T4", "C4": "T4", "T5": "T5", "C5": "T5"}


def compare(problem_a, problem_b, strategy: str = "auto", solver_config=None,
            config: TransformConfig | None = None, states=None) -> ComparisonReport:
    """Run the comparison criteria in order and verify against solved eigenvalues.

    auto: pointwise ordering (basic / T3), then the area transform (T1 or T4),
    then the weighted transform (T2 or T5).
    """
    cfg = config or TransformConfig()
    check_compatible(problem_a, problem_b)
    if strategy != "auto" and strategy not in THEOREMS:
        raise ValueError(f"unknown strategy {strategy!r}; expected auto or one of {THEOREMS}")
    if states is None:
        states = (problem_a.solve(solver_config), problem_b.solve(solver_config))
    Ea, Eb = states[0].E, states[1].E
    radial = problem_a.dimension > 1
    extent = [getattr(s, "r_max", None) or getattr(s, "x_max") for s in states]
    R = max(extent)
    explicit_scalar = problem_a.scalar is not None

    if strategy == "auto":
        families = ["basic"] + ([] if explicit_scalar else (["T4", "T5"] if radial else ["T1", "T2"]))
    elif strategy == "n-intersection":
        families = ["T4"] if radial else ["T1"]
    else:
        families = [_FAMILY[strategy]]
        if families[0] in ("T4", "T5") and not radial or families[0] in ("T1", "T2") and radial:
            raise IncompatibleProblems(f"{strategy} does not apply in dimension "
                                       f"{problem_a.dimension}")

    details: dict = {"E_a": Ea, "E_b": Eb, "R": R, "tried": []}
    applied, predicted = None, "inconclusive"
    for fam in families:
        details["tried"].append(fam)
        if fam == "basic":
            if explicit_scalar and problem_a.scalar != problem_b.scalar:
                details["basic"] = {"skipped": "scalar potentials differ"}
                continue
            le, ge = _pointwise(problem_a.potential, problem_b.potential, R, cfg)
            details["basic"] = {"V_a<=V_b": le, "V_a>=V_b": ge}
            name = "T3" if explicit_scalar else "basic"
            if le:
                applied, predicted = name, "E_a<=E_b"
                break
            if ge:
                applied, predicted = name, "E_a>=E_b"
                break
            continue
        label, info = _refined(fam, problem_a, problem_b, states, R, cfg)
        details[fam] = info
        if label is not None:
            applied, predicted = label, "E_a<=E_b"
            break

    tol = cfg.order_tol
    if predicted == "E_a<=E_b":
        consistent = Ea <= Eb + tol
    elif predicted == "E_a>=E_b":
        consistent = Ea >= Eb - tol
    else:
        consistent = True
    return ComparisonReport(applied, applied is not None, predicted, (Ea, Eb), consistent,
                            details)
