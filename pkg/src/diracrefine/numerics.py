"""
Foundation numerics: linear 2-component ODE integration, adaptive quadrature
(finite, improper and lobe-wise oscillatory), bracketed root finding and
sign-change scanning.

The ODE integrator is a Dormand-Prince 5(4) embedded pair with the usual
Hairer step control. The same core runs either jit-compiled (for the shooting
solvers, where the coefficient function is itself jitted) or as plain Python
(for arbitrary user coefficient functions).
"""
from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy import integrate, optimize


class NumericsError(RuntimeError):
    """Base class for failures of the numerical primitives."""


class StepSizeError(NumericsError):
    """The adaptive step collapsed below machine resolution."""


class QuadratureError(NumericsError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NonDecayingTailError(QuadratureError):
    """An improper integrand never dropped below the truncation threshold."""


class BracketError(NumericsError):
    """Root bracket ends do not have opposite signs."""


class LobeSignError(NumericsError):
    """Adjacent lobes of an oscillatory integrand have the same sign."""


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("grid needs at least 2 points")
        if pts[0] < 0:
            raise ValueError("grid must start at a non-negative abscissa")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size


@dataclass(frozen=True)
class SampledFunction:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.points.shape:
            raise ValueError("values must match the grid length")
        object.__setattr__(self, "values", vals)

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def __call__(self, x):
        """Linear interpolation; zero outside the sampled range."""
        return np.interp(x, self.grid.points, self.values, left=0.0, right=0.0)


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-11
    rel_tol: float = 1e-10
    max_depth: int = 500
    truncation_threshold: float = 1e-14
    max_lobes: int = 400
    lobe_tol: float = 1e-12

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "truncation_threshold", "lobe_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_depth <= 0 or self.max_lobes <= 0:
            raise ValueError("max_depth and max_lobes must be positive")


@dataclass(frozen=True)
class OdeConfig:
    abs_tol: float = 1e-11
    rel_tol: float = 1e-10
    max_steps: int = 200_000
    max_step: float = math.inf
    first_step: float = 0.0  # 0 selects a step from the local coefficient size

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_steps <= 0 or not self.max_step > 0:
            raise ValueError("max_steps and max_step must be positive")


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) core for y' = A(x) y with y in R^2
# ---------------------------------------------------------------------------

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2
STATUS_OVERFLOW = 3

_OVERFLOW_LIMIT = 1e250


def _dopri_linear2(coef, args, x0, ya0, yb0, x1, rtol, atol, h_first, h_max,
                   max_steps, normalize, store):
    """Integrate the linear system from x0 to x1 (either direction).

    ``coef(x, args)`` returns the matrix entries (a11, a12, a21, a22).
    With ``normalize`` the state is rescaled to unit length after each accepted
    step and the accumulated log of the scale factors is tracked, so the true
    solution is ``y * exp(logscale)``. The Pruefer winding (total signed
    rotation angle of the state vector) is accumulated in both modes.
    """
    c2 = 0.2
    c3 = 0.3
    c4 = 0.8
    c5 = 8.0 / 9.0
    a21 = 0.2
    a31 = 3.0 / 40.0
    a32 = 9.0 / 40.0
    a41 = 44.0 / 45.0
    a42 = -56.0 / 15.0
    a43 = 32.0 / 9.0
    a51 = 19372.0 / 6561.0
    a52 = -25360.0 / 2187.0
    a53 = 64448.0 / 6561.0
    a54 = -212.0 / 729.0
    a61 = 9017.0 / 3168.0
    a62 = -355.0 / 33.0
    a63 = 46732.0 / 5247.0
    a64 = 49.0 / 176.0
    a65 = -5103.0 / 18656.0
    b1 = 35.0 / 384.0
    b3 = 500.0 / 1113.0
    b4 = 125.0 / 192.0
    b5 = -2187.0 / 6784.0
    b6 = 11.0 / 84.0
    e1 = 71.0 / 57600.0
    e3 = -71.0 / 16695.0
    e4 = 71.0 / 1920.0
    e5 = -17253.0 / 339200.0
    e6 = 22.0 / 525.0
    e7 = -1.0 / 40.0

    cap = max_steps + 1 if store else 1
    xs = np.empty(cap)
    ya_s = np.empty(cap)
    yb_s = np.empty(cap)
    ls_s = np.empty(cap)

    direction = 1.0 if x1 >= x0 else -1.0
    span = abs(x1 - x0)
    x = x0
    ya = ya0
    yb = yb0
    logscale = 0.0
    winding = 0.0
    if normalize:
        nrm = math.hypot(ya, yb)
        if nrm > 0.0:
            ya /= nrm
            yb /= nrm
            logscale = math.log(nrm)
    n = 0
    if store:
        xs[0] = x
        ya_s[0] = ya
        yb_s[0] = yb
        ls_s[0] = logscale
    n = 1
    if span == 0.0:
        return STATUS_OK, n, xs, ya_s, yb_s, ls_s, winding, ya, yb, logscale

    p11, p12, p21, p22 = coef(x, args)
    k1a = p11 * ya + p12 * yb
    k1b = p21 * ya + p22 * yb
    if h_first > 0.0:
        h = h_first
    else:
        amax = max(abs(p11), abs(p12), abs(p21), abs(p22), 1e-300)
        h = 0.01 / amax
    h = min(h, span, h_max)
    status = STATUS_OK
    steps = 0
    while True:
        remaining = abs(x1 - x)
        if remaining <= 1e-15 * max(1.0, abs(x1)):
            break
        if steps >= max_steps:
            status = STATUS_MAX_STEPS
            break
        if h >= remaining:
            h = remaining
        if h < 1e-14 * max(1.0, abs(x)):
            status = STATUS_UNDERFLOW
            break
        hs = direction * h

        q11, q12, q21, q22 = coef(x + c2 * hs, args)
        ta = ya + hs * a21 * k1a
        tb = yb + hs * a21 * k1b
        k2a = q11 * ta + q12 * tb
        k2b = q21 * ta + q22 * tb

        q11, q12, q21, q22 = coef(x + c3 * hs, args)
        ta = ya + hs * (a31 * k1a + a32 * k2a)
        tb = yb + hs * (a31 * k1b + a32 * k2b)
        k3a = q11 * ta + q12 * tb
        k3b = q21 * ta + q22 * tb

        q11, q12, q21, q22 = coef(x + c4 * hs, args)
        ta = ya + hs * (a41 * k1a + a42 * k2a + a43 * k3a)
        tb = yb + hs * (a41 * k1b + a42 * k2b + a43 * k3b)
        k4a = q11 * ta + q12 * tb
        k4b = q21 * ta + q22 * tb

        q11, q12, q21, q22 = coef(x + c5 * hs, args)
        ta = ya + hs * (a51 * k1a + a52 * k2a + a53 * k3a + a54 * k4a)
        tb = yb + hs * (a51 * k1b + a52 * k2b + a53 * k3b + a54 * k4b)
        k5a = q11 * ta + q12 * tb
        k5b = q21 * ta + q22 * tb

        xn = x + hs
        q11, q12, q21, q22 = coef(xn, args)
        ta = ya + hs * (a61 * k1a + a62 * k2a + a63 * k3a + a64 * k4a + a65 * k5a)
        tb = yb + hs * (a61 * k1b + a62 * k2b + a63 * k3b + a64 * k4b + a65 * k5b)
        k6a = q11 * ta + q12 * tb
        k6b = q21 * ta + q22 * tb

        na = ya + hs * (b1 * k1a + b3 * k3a + b4 * k4a + b5 * k5a + b6 * k6a)
        nb = yb + hs * (b1 * k1b + b3 * k3b + b4 * k4b + b5 * k5b + b6 * k6b)
        k7a = q11 * na + q12 * nb
        k7b = q21 * na + q22 * nb

        ea = hs * (e1 * k1a + e3 * k3a + e4 * k4a + e5 * k5a + e6 * k6a + e7 * k7a)
        eb = hs * (e1 * k1b + e3 * k3b + e4 * k4b + e5 * k5b + e6 * k6b + e7 * k7b)
        sa = atol + rtol * max(abs(ya), abs(na))
        sb = atol + rtol * max(abs(yb), abs(nb))
        err = math.sqrt(0.5 * ((ea / sa) ** 2 + (eb / sb) ** 2))

        if not math.isfinite(err):
            h *= 0.25
            continue
        dtheta = math.atan2(ya * nb - yb * na, ya * na + yb * nb)
        if err <= 1.0 and abs(dtheta) < 0.5 * math.pi:
            steps += 1
            x = xn
            winding += dtheta
            ya = na
            yb = nb
            k1a = k7a
            k1b = k7b
            if normalize:
                nrm = math.hypot(ya, yb)
                if nrm > 0.0:
                    ya /= nrm
                    yb /= nrm
                    k1a /= nrm
                    k1b /= nrm
                    logscale += math.log(nrm)
            elif max(abs(ya), abs(yb)) > _OVERFLOW_LIMIT:
                status = STATUS_OVERFLOW
                if store:
                    xs[n] = x
                    ya_s[n] = ya
                    yb_s[n] = yb
                    ls_s[n] = logscale
                    n += 1
                break
            if store:
                xs[n] = x
                ya_s[n] = ya
                yb_s[n] = yb
                ls_s[n] = logscale
                n += 1
            if err == 0.0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * err ** -0.2))
            h = min(h * fac, h_max)
        else:
            if abs(dtheta) >= 0.5 * math.pi:
                h *= 0.25
            else:
                h *= max(0.1, 0.9 * err ** -0.2)
    return status, n, xs, ya_s, yb_s, ls_s, winding, ya, yb, logscale


# inlined into cached callers that bind a concrete coefficient function; a
# dispatcher passed as an argument has no stable cache key
dopri_linear2 = njit(inline="always")(_dopri_linear2)


@dataclass
class OdeSolution:
    """Samples of a 2-component solution at the accepted integration steps.

    ``x`` is ordered as integrated (descending for backward integration);
    ``first`` and ``second`` always return ascending-grid SampledFunctions.
    """

    x: np.ndarray
    y: np.ndarray  # shape (n, 2), true (unnormalised) values
    winding: float
    overflowed: bool = False
    status: int = STATUS_OK

    def _component(self, i):
        order = np.argsort(self.x)
        return SampledFunction(Grid(self.x[order]), self.y[order, i])

    @property
    def first(self) -> SampledFunction:
        return self._component(0)

    @property
    def second(self) -> SampledFunction:
        return self._component(1)


def integrate_ode(coeffs: Callable[[float], Sequence[Sequence[float]]], start: float,
                  y0: Sequence[float], stop: float,
                  config: OdeConfig | None = None) -> OdeSolution:
    """Integrate the linear system ``y' = coeffs(x) @ y`` from ``start`` to ``stop``.

    ``coeffs(x)`` returns a 2x2 array-like. The solution is sampled at every
    accepted step of the adaptive Dormand-Prince pair. Component blow-up past
    1e250 is reported through ``overflowed`` rather than raised, since
    shooting on a wrong trial energy is expected to diverge.
    """
    config = config or OdeConfig()

    def coef(x, _args):
        a = coeffs(x)
        return float(a[0][0]), float(a[0][1]), float(a[1][0]), float(a[1][1])

    status, n, xs, ya, yb, _, winding, *_ = _dopri_linear2(
        coef, (), float(start), float(y0[0]), float(y0[1]), float(stop),
        config.rel_tol, config.abs_tol, config.first_step, config.max_step,
        config.max_steps, False, True)
    if status == STATUS_UNDERFLOW:
        raise StepSizeError(f"step size underflow near x={xs[n - 1]:.6g}")
    if status == STATUS_MAX_STEPS:
        raise StepSizeError(f"more than {config.max_steps} steps required")
    y = np.column_stack([ya[:n], yb[:n]])
    return OdeSolution(xs[:n].copy(), y, winding, overflowed=status == STATUS_OVERFLOW,
                       status=status)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def _quad_finite(f, a, b, config):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, epsabs=config.abs_tol, epsrel=config.rel_tol,
                             limit=config.max_depth, full_output=1)
    value, abserr = out[0], out[1]
    if len(out) > 3:
        # quad only appends a message when ier > 0
        target = max(config.abs_tol, config.rel_tol * abs(value))
        if "maximum number of subdivisions" in str(out[3]):
            raise QuadratureError(
                f"max_depth={config.max_depth} subdivisions exceeded on [{a}, {b}]")
        if abserr > 100 * target:
            raise QuadratureError(
                f"quadrature on [{a}, {b}] failed: error estimate {abserr:.3g}")
    return value


def _truncation_point(f, a, config, scale):
    """Probe outward until |f| stays below the threshold at 3 consecutive points."""
    x = a
    step = scale
    below = 0
    first_below = None
    for _ in range(200):
        x = x + step
        if abs(f(x)) < config.truncation_threshold:
            if below == 0:
                first_below = x
            below += 1
            if below == 3:
                return first_below
        else:
            below = 0
        step *= 2.0
        if x > 1e9 * scale + abs(a):
            break
    raise NonDecayingTailError(
        f"integrand did not decay below {config.truncation_threshold:g} beyond x={a}")


def quad_adaptive(f: Callable[[float], float], a: float, b: float,
                  config: QuadratureConfig | None = None) -> float:
    """Adaptive Gauss-Kronrod integral of ``f`` over [a, b]; ``b`` may be +inf.

    For an infinite upper limit the integrand is truncated at the first of
    three consecutive geometric probe points where ``|f|`` falls below
    ``config.truncation_threshold``; the retained range is integrated
    segment by segment.
    """
    config = config or QuadratureConfig()
    if b == a:
        return 0.0
    if math.isinf(b):
        if b < 0:
            raise ValueError("only +inf is supported as an infinite limit")
        scale = max(1.0, abs(a)) * 0.5
        cut = _truncation_point(f, a, config, scale)
        edges = [a]
        step = scale
        while edges[-1] + step < cut:
            edges.append(edges[-1] + step)
            step *= 2.0
        edges.append(cut)
        return math.fsum(_quad_finite(f, lo, hi, config) for lo, hi in zip(edges[:-1], edges[1:]))
    return _quad_finite(f, a, b, config)


@dataclass
class OscillatoryResult:
    total: float
    lobes: list[float] = field(default_factory=list)
    error_estimate: float = 0.0
    extrapolated: bool = False


def _accelerate(partial_sums):
    """Repeated averaging of alternating partial sums; returns (value, error estimate)."""
    level = np.asarray(partial_sums, dtype=float)
    prev = level[-1]
    while level.size > 1:
        prev = level[-1]
        level = 0.5 * (level[:-1] + level[1:])
    return float(level[0]), float(abs(level[0] - prev))


def quad_oscillatory(f: Callable[[float], float], zeros: Iterable[float],
                     config: QuadratureConfig | None = None) -> OscillatoryResult:
    """Integrate ``f`` lobe by lobe between consecutive entries of ``zeros``.

    The first entry is the lower integration limit. A finite sequence gives an
    exact lobe sum. An unbounded iterator is consumed until a lobe area drops
    below ``config.lobe_tol`` (then the next lobe bounds the remainder) or
    ``config.max_lobes`` lobes have been summed, in which case the alternating
    partial sums are accelerated by repeated averaging.
    """
    config = config or QuadratureConfig()
    it = iter(zeros)
    try:
        lo = float(next(it))
    except StopIteration:
        raise ValueError("zeros must contain at least the lower limit") from None
    lobes: list[float] = []
    signed: list[float] = []
    sign_prev = 0.0
    exhausted = True
    for z in it:
        hi = float(z)
        if hi <= lo:
            raise ValueError("zeros must be strictly increasing")
        area = _quad_finite(f, lo, hi, config)
        sign = math.copysign(1.0, area) if area != 0.0 else 0.0
        if sign_prev and sign and sign == sign_prev:
            raise LobeSignError(f"lobes ending at {lo:.6g} and {hi:.6g} have the same sign")
        sign_prev = sign or sign_prev
        lobes.append(abs(area))
        signed.append(area)
        lo = hi
        if abs(area) < config.lobe_tol:
            try:
                nxt = float(next(it))
            except StopIteration:
                break
            bound = abs(_quad_finite(f, lo, nxt, config))
            return OscillatoryResult(math.fsum(signed), lobes, bound, extrapolated=True)
        if len(lobes) >= config.max_lobes:
            exhausted = False
            break
    if exhausted:
        return OscillatoryResult(math.fsum(signed), lobes, 0.0, extrapolated=False)
    partial = np.cumsum(signed)
    tail = partial[-min(len(partial), 64):]
    value, err = _accelerate(tail)
    return OscillatoryResult(value, lobes, err, extrapolated=True)


# ---------------------------------------------------------------------------
# Roots and sign changes
# ---------------------------------------------------------------------------


def find_root_bracketed(f: Callable[[float], float], lo: float, hi: float,
                        tol: float = 1e-12) -> float:
    """Root of ``f`` inside [lo, hi]; the ends must have opposite signs."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if not (np.sign(flo) * np.sign(fhi) < 0):
        raise BracketError(f"f({lo})={flo:.3g} and f({hi})={fhi:.3g} do not bracket a root")
    return optimize.brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)


def _evaluate_many(f, xs):
    try:
        vals = np.asarray(f(xs), dtype=float)
        if vals.shape == xs.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([f(float(x)) for x in xs])


def scan_sign_changes(f: Callable, a: float, b: float,
                      step: float | None = None) -> list[tuple[float, float]]:
    """Brackets (lo, hi) of strict sign changes of ``f`` on [a, b], ordered.

    Exact zeros on the sampling grid are skipped; a bracket always joins two
    samples with opposite nonzero signs.
    """
    if step is None:
        step = (b - a) / 2048
    if not step > 0:
        raise ValueError("step must be positive")
    n = max(2, int(math.ceil((b - a) / step)) + 1)
    xs = np.linspace(a, b, n)
    vals = _evaluate_many(f, xs)
    keep = np.flatnonzero(np.isfinite(vals) & (vals != 0.0))
    signs = np.sign(vals[keep])
    flips = np.flatnonzero(signs[:-1] != signs[1:])
    return [(float(xs[keep[i]]), float(xs[keep[i + 1]])) for i in flips]
