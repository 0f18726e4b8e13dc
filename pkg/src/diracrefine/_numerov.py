"""
Independent Numerov solver for the Schroedinger-like reductions.

Used only as a cross-check oracle for the Dirac shooting solver. For a trial
E the reduced operator -y'' + W y has a ground eigenvalue lam0(E), found by
node-count bisection; the Dirac energy is the root of
lam0(E) - (E^2 - m^2).

1D: uniform grid on [0, X], even start.
Radial: t = ln r with psi = r^(1/2) u, u'' = (r^2 (W - lam) + 1/4) u.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy import integrate, optimize

from .diracd import Channel, kd
from .potentials import PotentialSpec, SymmetryMode, evaluate


@dataclass(frozen=True)
class NumerovConfig:
    points: int = 60000
    decay: float = 40.0
    lam_rel_tol: float = 1e-13
    e_tol: float = 1e-11


@njit(cache=True)
def _has_node(A, B, lam, h, even_start, nu, a1, t0):
    """True if the regular solution of y'' = (A - lam B) y changes sign on the grid."""
    n = A.size
    c = h * h / 12.0
    f0 = A[0] - lam * B[0]
    f1 = A[1] - lam * B[1]
    wm = 1.0 - c * f0
    w = 1.0 - c * f1
    if even_start:
        ym = 1.0
        y = (1.0 + 5.0 * c * f0) / w
    else:
        r0 = math.exp(t0)
        r1 = math.exp(t0 + h)
        ym = 1.0 + a1 * r0
        y = math.exp(nu * h) * (1.0 + a1 * r1)
    if ym * y < 0:
        return True
    for i in range(1, n - 1):
        wp = 1.0 - c * (A[i + 1] - lam * B[i + 1])
        yp = ((12.0 - 10.0 * w) * y - wm * ym) / wp
        if yp * y < 0 or yp == 0.0:
            return True
        if abs(yp) > 1e100:
            yp *= 1e-100
            y *= 1e-100
        ym, y = y, yp
        wm, w = w, wp
    return False


@dataclass
class _Grid:
    A: np.ndarray
    B: np.ndarray
    h: float
    even: bool
    nu: float
    a1: float
    t0: float

    def has_node(self, lam):
        return _has_node(self.A, self.B, lam, self.h, self.even, self.nu, self.a1, self.t0)


def _decay_end(q, x, decay):
    """Abscissa where int sqrt(q) beyond the last non-positive q reaches ``decay``."""
    neg = np.flatnonzero(q <= 0)
    i0 = int(neg[-1]) if neg.size else 0
    cum = integrate.cumulative_trapezoid(np.sqrt(np.clip(q[i0:], 0, None)), x[i0:], initial=0)
    hit = np.flatnonzero(cum >= decay)
    return float(x[i0 + hit[0]]) if hit.size else float(x[-1])


def ground_lambda(grid: _Grid, guess: float, rel_tol: float = 1e-13) -> float:
    """sup{lam : no node} by bisection."""
    step = max(abs(guess), 1e-3)
    lo, hi = guess, guess
    while grid.has_node(lo):
        lo -= step
        step *= 2
    step = max(abs(guess), 1e-3)
    while not grid.has_node(hi):
        hi += step
        step *= 2
    while hi - lo > rel_tol * max(abs(lo), abs(hi), 1e-300) + 1e-300:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if grid.has_node(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _grid_1d(V, mode, m, E, cfg):
    coupling = 2.0 * (E + mode.s * m)
    lam = E * E - m * m
    scan = np.concatenate(([0.0], np.geomspace(1e-6, 1e5, 6000)))
    X = max(_decay_end(coupling * evaluate(V, scan) - lam, scan, cfg.decay), 1e-2)
    x = np.linspace(0.0, X, cfg.points)
    W = coupling * evaluate(V, x)
    return _Grid(W, np.ones_like(x), x[1] - x[0], True, 0.0, 0.0, 0.0)


def _grid_radial(V, mode, m, k, E, cfg):
    coupling = 2.0 * (E + mode.s * m)
    cent = k * (k + mode.s)
    lam = E * E - m * m
    scan = np.geomspace(1e-8, 1e5, 6000)
    X = _decay_end(cent / scan ** 2 + coupling * evaluate(V, scan) - lam, scan, cfg.decay)
    t = np.linspace(math.log(1e-8 * X), math.log(X), cfg.points)
    r = np.exp(t)
    A = cent + r * r * coupling * evaluate(V, r) + 0.25
    nu = math.sqrt(0.25 + cent)
    a1 = coupling * V.coulomb_coefficient / (2 * nu + 1)
    return _Grid(A, r * r, t[1] - t[0], False, nu, a1, t[0])


def _bracket_near(G, E0, m, lo_lim, hi_lim):
    d = 1e-3 * m
    for _ in range(30):
        a, b = max(E0 - d, lo_lim), min(E0 + d, hi_lim)
        if G(a) * G(b) <= 0:
            return a, b
        d *= 2
    raise RuntimeError(f"reduced equation: no root bracketed near E={E0}")


def reduced_energy_1d(V: PotentialSpec, mode: SymmetryMode, m: float, E_guess: float,
                      window=(-math.inf, math.inf), config: NumerovConfig | None = None) -> float:
    """Dirac energy reproduced from the reduced equation of phi_q alone."""
    cfg = config or NumerovConfig()
    lo_lim, hi_lim = window[0] + 1e-12 * m, window[1] - 1e-12 * m

    def G(E):
        return ground_lambda(_grid_1d(V, mode, m, E, cfg), E * E - m * m,
                             cfg.lam_rel_tol) - (E * E - m * m)

    a, b = _bracket_near(G, E_guess, m, lo_lim, hi_lim)
    return optimize.brentq(G, a, b, xtol=cfg.e_tol)


def reduced_energy_radial(V: PotentialSpec, mode: SymmetryMode, m: float, channel: Channel,
                          E_guess: float, window=(-math.inf, math.inf),
                          config: NumerovConfig | None = None) -> float:
    cfg = config or NumerovConfig()
    k = kd(channel)
    lo_lim, hi_lim = window[0] + 1e-12 * m, window[1] - 1e-12 * m

    def G(E):
        return ground_lambda(_grid_radial(V, mode, m, k, E, cfg), E * E - m * m,
                             cfg.lam_rel_tol) - (E * E - m * m)

    a, b = _bracket_near(G, E_guess, m, lo_lim, hi_lim)
    return optimize.brentq(G, a, b, xtol=cfg.e_tol)
