"""
Shooting engine shared by the 1D and radial Dirac solvers.

Both systems are linear, traceless and affine in E:

    1D      phi1' = -(E + m - V + S) phi2       phi2' = (E - m - V - S) phi1
    radial  psi1' = (m + E + S - V) psi2 - k psi1 / r
            psi2' = (m - E + S + V) psi1 + k psi2 / r

The solution is integrated outward from the origin (parity or Frobenius start)
and inward from a far point X (decaying eigenvector of the frozen matrix) up
to a matching point x_m. The Pruefer phase difference F(E) between the two
pieces is continuous and monotone in E and eigenvalues sit at F = j*pi, which
gives guaranteed brackets for every eigenvalue between two trial energies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy import integrate, optimize

from .numerics import (STATUS_MAX_STEPS, STATUS_UNDERFLOW, Grid, NumericsError,
                       SampledFunction, dopri_linear2)
from .potentials import PotentialSpec, potential_value


class EigenvalueNotFound(NumericsError):
    """No acceptable bound state inside the searched energy window."""


@njit(cache=True)
def coef_1d(x, args):
    E, m, k, cv, pv, txv, tyv, cs, ps, txs, tys, sfac = args
    r = abs(x)
    V = potential_value(cv, pv, txv, tyv, r)
    if cs < 0:
        S = sfac * V
    else:
        S = potential_value(cs, ps, txs, tys, r)
    return 0.0, -(E + m - V + S), E - m - V - S, 0.0


@njit(cache=True)
def coef_radial(r, args):
    E, m, k, cv, pv, txv, tyv, cs, ps, txs, tys, sfac = args
    V = potential_value(cv, pv, txv, tyv, r)
    if cs < 0:
        S = sfac * V
    else:
        S = potential_value(cs, ps, txs, tys, r)
    return -k / r, m + E + S - V, m - E + S + V, k / r


@njit(cache=True)
def coef_at(radial, x, args):
    if radial:
        return coef_radial(x, args)
    return coef_1d(x, args)


@njit(cache=True)
def coef_arrays(radial, args, xs):
    n = xs.size
    a11 = np.empty(n)
    a12 = np.empty(n)
    a21 = np.empty(n)
    a22 = np.empty(n)
    for i in range(n):
        a11[i], a12[i], a21[i], a22[i] = coef_at(radial, xs[i], args)
    return a11, a12, a21, a22


@njit(cache=True)
def kappa2_array(radial, args, xs):
    out = np.empty(xs.size)
    for i in range(xs.size):
        p11, p12, p21, p22 = coef_at(radial, xs[i], args)
        out[i] = p11 * p11 + p12 * p21
    return out


@njit(cache=True)
def integrate_system(radial, args, x0, ya0, yb0, x1, rtol, atol, h_first, h_max, max_steps,
                     normalize, store):
    if radial:
        return dopri_linear2(coef_radial, args, x0, ya0, yb0, x1, rtol, atol, h_first, h_max,
                             max_steps, normalize, store)
    return dopri_linear2(coef_1d, args, x0, ya0, yb0, x1, rtol, atol, h_first, h_max,
                         max_steps, normalize, store)


@dataclass(frozen=True)
class SolverConfig:
    abs_tol: float = 1e-11
    rel_tol: float = 1e-10
    eig_tol: float = 1e-10
    decay: float = 40.0
    r0_factor: float = 1e-6
    samples: int = 3000
    max_steps: int = 400_000
    coarse_rel_tol: float = 1e-8


@dataclass
class DiracSystem:
    """Coefficients of one Dirac problem, minus the trial energy."""

    m: float
    V: PotentialSpec
    S: PotentialSpec | None = None
    sfac: float = 1.0  # S = sfac * V when S is None
    k: float = 0.0
    radial: bool = False
    vanishing: int = 2  # 1D only: component that is odd (zero at the origin)

    def __post_init__(self):
        cv, pv, txv, tyv = self.V.packed()
        if self.S is None:
            cs, ps, txs, tys = -1, np.zeros(4), txv, tyv
        else:
            cs, ps, txs, tys = self.S.packed()
        self._packed = (float(self.k), cv, pv, txv, tyv, cs, ps, txs, tys, float(self.sfac))

    def args(self, E):
        return (float(E), float(self.m)) + self._packed

    # -- boundary data ---------------------------------------------------

    def _coulomb(self):
        cV = self.V.coulomb_coefficient
        cS = self.sfac * cV if self.S is None else self.S.coulomb_coefficient
        return cV, cS

    def _regular(self):
        rV = self.V.regular_part_at_origin()
        rS = self.sfac * rV if self.S is None else self.S.regular_part_at_origin()
        return rV, rS

    def indicial(self):
        """(gamma, u0, M0) of the Frobenius start psi ~ r^gamma u0."""
        cV, cS = self._coulomb()
        A0, B0 = cS - cV, cS + cV
        k = self.k
        g2 = k * k + A0 * B0
        if g2 <= 0:
            raise EigenvalueNotFound("Coulomb coupling too strong: no regular solution at r=0")
        gamma = math.sqrt(g2)
        cand1 = np.array([A0, k + gamma])
        cand2 = np.array([gamma - k, B0])
        u0 = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
        u0 = u0 / np.linalg.norm(u0)
        M0 = np.array([[-k, A0], [B0, k]])
        return gamma, u0, M0

    def start(self, E, r0):
        """Initial point and (unnormalised) state of the outward integration."""
        if not self.radial:
            return 0.0, (1.0, 0.0) if self.vanishing == 2 else (0.0, 1.0)
        gamma, u0, M0 = self.indicial()
        rV, rS = self._regular()
        M1 = np.array([[0.0, self.m + E + rS - rV], [self.m - E + rS + rV, 0.0]])
        u1 = np.linalg.solve((gamma + 1.0) * np.eye(2) - M0, M1 @ u0)
        y = u0 + r0 * u1
        return r0, (float(y[0]), float(y[1]))

    def decaying_vector(self, E, X):
        p11, p12, p21, p22 = coef_at(self.radial, X, self.args(E))
        lam2 = p11 * p11 + p12 * p21
        lam = math.sqrt(lam2) if lam2 > 0 else 0.0
        v1 = np.array([p12, -(p11 + lam)])
        v2 = np.array([p22 + lam, -p21])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        if v[0] < 0 or (v[0] == 0 and v[1] < 0):
            v = -v
        n = np.linalg.norm(v)
        return (1.0, 0.0) if n == 0 else (float(v[0] / n), float(v[1] / n))

    def kappa2(self, xs, E):
        return kappa2_array(self.radial, self.args(E), np.ascontiguousarray(xs, dtype=float))


_SCAN_RADIAL = np.geomspace(1e-7, 1e5, 6000)
_SCAN_1D = np.concatenate(([0.0], np.geomspace(1e-6, 1e5, 6000)))


@dataclass(frozen=True)
class Geometry:
    x0: float
    xm: float
    X: float


def geometry(system: DiracSystem, E: float, tol: SolverConfig) -> Geometry:
    """Matching point at the bottom of the well, X where the WKB decay reaches tol.decay."""
    scan = _SCAN_RADIAL if system.radial else _SCAN_1D
    k2 = system.kappa2(scan, E)
    k2 = np.where(np.isfinite(k2), k2, np.inf)
    imin = int(np.argmin(k2))
    xm = float(scan[imin])
    allowed = np.flatnonzero(k2[imin:] <= 0)
    itp = imin + (int(allowed[-1]) if allowed.size else 0)
    kap = np.sqrt(np.clip(k2[itp:], 0.0, None))
    cum = integrate.cumulative_trapezoid(kap, scan[itp:], initial=0.0)
    reach = np.flatnonzero(cum >= tol.decay)
    X = float(scan[itp + reach[0]]) if reach.size else float(scan[-1])
    if system.radial:
        scale = max(xm, 1e-3 * X)
        x0 = tol.r0_factor * scale
        xm = max(xm, 10 * x0)
    else:
        x0 = 0.0
    X = max(X, 1.05 * xm, 1e-3)
    return Geometry(x0, xm, X)


def _integrate(system, args, x0, y, x1, rtol, atol, h_max, max_steps, store):
    out = integrate_system(system.radial, args, x0, y[0], y[1], x1, rtol, atol, 0.0, h_max,
                           max_steps, True, store)
    if out[0] in (STATUS_UNDERFLOW, STATUS_MAX_STEPS):
        raise NumericsError(f"integration from {x0:.4g} to {x1:.4g} failed (status {out[0]})")
    return out


def phase_mismatch(system: DiracSystem, E: float, geom: Geometry, rtol: float,
                   atol: float, max_steps: int = 400_000):
    """F(E) = theta_out(x_m) - theta_in(x_m) and the two unit vectors at x_m."""
    args = system.args(E)
    x0, y0 = system.start(E, geom.x0)
    th_out = math.atan2(y0[1], y0[0])
    if geom.xm > x0:
        res = _integrate(system, args, x0, y0, geom.xm, rtol, atol, math.inf, max_steps, False)
        th_out += res[6]
        u_out = (res[7], res[8])
    else:
        n = math.hypot(*y0)
        u_out = (y0[0] / n, y0[1] / n)
    v = system.decaying_vector(E, geom.X)
    th_in = math.atan2(v[1], v[0])
    res = _integrate(system, args, geom.X, v, geom.xm, rtol, atol, math.inf, max_steps, False)
    th_in += res[6]
    return th_out - th_in, u_out, (res[7], res[8])


@dataclass
class ShootingResult:
    E: float
    x: np.ndarray
    y: np.ndarray  # (n, 2)
    geometry: Geometry
    mismatch: float
    phase_index: int


def _sample_state(system, E, geom, tol):
    args = system.args(E)
    h_max = geom.X / tol.samples
    x0, y0 = system.start(E, geom.x0)
    pieces_x, pieces_y = [], []
    if geom.xm > x0:
        st, n, xs, ya, yb, ls, *_ = _integrate(system, args, x0, y0, geom.xm, tol.rel_tol,
                                               tol.abs_tol, h_max, tol.max_steps, True)
        w = np.exp(ls[:n] - ls[n - 1])
        out_x = xs[:n].copy()
        out_y = np.column_stack([ya[:n] * w, yb[:n] * w])
    else:
        nrm = math.hypot(*y0)
        out_x = np.array([x0])
        out_y = np.array([[y0[0] / nrm, y0[1] / nrm]])
    v = system.decaying_vector(E, geom.X)
    st, n, xs, ya, yb, ls, *_ = _integrate(system, args, geom.X, v, geom.xm, tol.rel_tol,
                                           tol.abs_tol, h_max, tol.max_steps, True)
    w = np.exp(ls[:n] - ls[n - 1])
    in_x = xs[:n][::-1].copy()
    in_y = np.column_stack([ya[:n] * w, yb[:n] * w])[::-1]
    u_out = out_y[-1]
    u_in = in_y[0]
    c = float(np.dot(u_out, u_in))
    mismatch = float(u_out[0] * u_in[1] - u_out[1] * u_in[0])
    in_y = in_y * c
    x = np.concatenate([out_x[:-1], in_x])
    y = np.vstack([out_y[:-1], in_y])
    return x, y, mismatch


def _polish(system, E_guess, tol, scale):
    """Refine a coarse root with geometry fitted to the root's own energy."""
    geom = geometry(system, E_guess, tol)

    def F(E):
        return phase_mismatch(system, E, geom, tol.rel_tol, tol.abs_tol, tol.max_steps)[0]

    f0 = F(E_guess)
    j = int(round(f0 / math.pi))
    delta = max(1e-7 * scale, 10 * tol.eig_tol)
    for _ in range(40):
        lo, hi = E_guess - delta, E_guess + delta
        flo, fhi = F(lo) - j * math.pi, F(hi) - j * math.pi
        if flo * fhi <= 0:
            break
        delta *= 4
    else:
        raise EigenvalueNotFound(f"could not re-bracket the eigenvalue near E={E_guess:.8g}")
    E = optimize.brentq(lambda e: F(e) - j * math.pi, lo, hi, xtol=tol.eig_tol,
                        rtol=4 * np.finfo(float).eps)
    resid = abs(F(E) - j * math.pi)
    if resid > 1e-5:
        raise EigenvalueNotFound(f"phase jump, not an eigenvalue, near E={E:.8g}")
    return E, geom, j


def _brackets(window, u_sign, m):
    """Successive trial-energy intervals, ordered by increasing u = u_sign * E."""
    lo, hi = window
    if math.isfinite(lo) and math.isfinite(hi):
        edges_u = [-m * (1 - 1e-9)]
        for kap in (0.5, 0.25, 0.1, 0.03, 0.01, 0.003):
            edges_u.append(m * math.sqrt(1 - kap * kap))
    else:
        edge = lo if math.isfinite(lo) else hi
        u_edge = u_sign * edge
        edges_u = [u_edge + 1e-9 * m] + [u_edge + m * 2.0 ** i for i in range(-2, 14)]
    for ua, ub in zip(edges_u[:-1], edges_u[1:]):
        yield u_sign * ua, u_sign * ub


def search_direction(window, s: int) -> int:
    """Sign u such that the ground state is the first root in increasing u * E.

    Half-infinite windows are walked away from their finite edge; inside
    (-m, m) the order is that of s E.
    """
    lo, hi = window
    if math.isinf(hi):
        return 1
    if math.isinf(lo):
        return -1
    return s


def solve_ground(system: DiracSystem, window, u_sign: int, accept, tol: SolverConfig,
                 scale: float | None = None, max_rejects: int | None = None):
    """Lowest state in the order of increasing ``u_sign * E`` that ``accept``s.

    ``accept(ShootingResult) -> bool`` encodes the nodeless requirement of the
    caller. Returns the accepted result. When node counts grow with energy the
    caller may pass ``max_rejects`` to stop after that many rejected states
    instead of walking an accumulating series up to the threshold.
    """
    scale = scale or max(system.m, 1.0)
    seen: list[float] = []
    rejects = 0
    failed = []
    for Ea, Eb in _brackets(window, u_sign, system.m):
        geom = geometry(system, Eb, tol)
        try:
            Fa = phase_mismatch(system, Ea, geom, tol.coarse_rel_tol, tol.abs_tol,
                                tol.max_steps)[0]
            Fb = phase_mismatch(system, Eb, geom, tol.coarse_rel_tol, tol.abs_tol,
                                tol.max_steps)[0]
        except NumericsError:
            # typically no well at all near threshold: the matching point runs
            # off to the end of the scan and the step budget is exhausted
            failed.append((Ea, Eb))
            continue
        jlo, jhi = sorted((Fa / math.pi, Fb / math.pi))
        js = list(range(math.floor(jlo) + 1, math.ceil(jhi)))
        roots = []
        for j in js:
            def G(E, j=j):
                return phase_mismatch(system, E, geom, tol.coarse_rel_tol, tol.abs_tol,
                                      tol.max_steps)[0] - j * math.pi
            try:
                roots.append(optimize.brentq(G, Ea, Eb, xtol=1e-9 * scale))
            except ValueError:
                continue
        roots.sort(key=lambda e: u_sign * e)
        for E0 in roots:
            try:
                E, g, j = _polish(system, E0, tol, scale)
            except EigenvalueNotFound:
                continue
            if any(abs(E - s) < 1e-7 * scale for s in seen):
                continue
            seen.append(E)
            x, y, mism = _sample_state(system, E, g, tol)
            res = ShootingResult(E, x, y, g, mism, j)
            if accept(res):
                return res
            rejects += 1
            if max_rejects is not None and rejects >= max_rejects:
                raise EigenvalueNotFound(f"first {rejects} states in {window} have nodes")
    note = f" ({len(failed)} bracket(s) could not be integrated)" if failed else ""
    raise EigenvalueNotFound(f"no acceptable bound state in window {window}{note}")


# ---------------------------------------------------------------------------
# shared post-processing
# ---------------------------------------------------------------------------


def node_count_values(values: np.ndarray, rel_floor: float = 1e-12) -> int:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return 0
    floor = rel_floor * np.max(np.abs(v))
    if floor == 0:
        return 0
    keep = v[np.abs(v) > floor]
    s = np.sign(keep)
    return int(np.count_nonzero(s[:-1] != s[1:]))


def rk4_defect(system: DiracSystem, E: float, x: np.ndarray, y: np.ndarray,
               substeps: int = 16) -> float:
    """Max one-interval defect of the samples against an independent fixed-step RK4.

    Each sample is propagated to the next abscissa with ``substeps`` classical
    RK4 steps; the mismatch is reported relative to the largest component.
    """
    args = system.args(E)
    xa = x[:-1]
    h = (x[1:] - x[:-1]) / substeps
    ya = y[:-1, 0].copy()
    yb = y[:-1, 1].copy()

    def f(xx, a, b):
        a11, a12, a21, a22 = coef_arrays(system.radial, args, np.ascontiguousarray(xx))
        return a11 * a + a12 * b, a21 * a + a22 * b

    xx = xa.copy()
    for _ in range(substeps):
        k1 = f(xx, ya, yb)
        k2 = f(xx + h / 2, ya + h / 2 * k1[0], yb + h / 2 * k1[1])
        k3 = f(xx + h / 2, ya + h / 2 * k2[0], yb + h / 2 * k2[1])
        k4 = f(xx + h, ya + h * k3[0], yb + h * k3[1])
        ya = ya + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        yb = yb + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        xx = xx + h
    scale = np.max(np.abs(y))
    return float(max(np.max(np.abs(ya - y[1:, 0])), np.max(np.abs(yb - y[1:, 1]))) / scale)


def sampled(x, values) -> SampledFunction:
    return SampledFunction(Grid(x), values)
