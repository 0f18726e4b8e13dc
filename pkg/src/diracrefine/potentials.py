"""
Potential catalog, symmetry-mode bookkeeping and asymptotic classification.

Every catalog kind is a radial function V(r) on r >= 0. One-dimensional
problems evaluate it at |x|, so 1D potentials are even by construction.
Evaluation goes through one jitted kernel shared by the numpy path and by the
shooting solvers.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np
from numba import njit


class PotentialError(ValueError):
    """Invalid potential parameters or evaluation outside the domain."""


@dataclass(frozen=True)
class SymmetryMode:
    """S = s V; ``q`` selects the component housed by the reduced equation."""

    s: int

    def __post_init__(self):
        if self.s not in (1, -1):
            raise ValueError(f"symmetry s must be +1 or -1, got {self.s!r}")

    @property
    def q(self) -> int:
        return 1 if self.s == 1 else 2


SPIN = SymmetryMode(1)
PSEUDO_SPIN = SymmetryMode(-1)


class PotentialClass(str, enum.Enum):
    CLASS1 = "class1"
    CLASS2 = "class2"
    CLASS3 = "class3"
    UNCLASSIFIED = "unclassified"


# kind -> (kernel code, ordered parameter names)
KINDS: dict[str, tuple[int, tuple[str, ...]]] = {
    "zero": (0, ()),
    "harmonic": (1, ("a",)),
    "sine_modulated_harmonic": (2, ("b", "beta")),
    "coulomb": (3, ("beta",)),
    "cutoff_coulomb": (4, ("v", "a")),
    "yukawa": (5, ("alpha", "a")),
    "softcore": (6, ("alpha", "a", "q")),
    "sech_squared": (7, ("beta", "b")),
    "user_tabulated": (8, ()),
}

TAILS = ("zero", "+inf", "-inf")

_EMPTY = np.zeros(1)


@njit(cache=True)
def potential_value(code, p, tx, ty, r):
    if code == 0:
        return 0.0
    if code == 1:
        return p[0] * r * r
    if code == 2:
        z = r * r * r + p[1]
        sinc = 1.0 if z == 0.0 else math.sin(z) / z
        return p[0] * r * r * (1.0 + sinc)
    if code == 3:
        return -p[0] / r
    if code == 4:
        return -p[0] / (r + p[1])
    if code == 5:
        return -p[0] * math.exp(-p[1] * r) / r
    if code == 6:
        return -p[0] / (r ** p[2] + p[1] ** p[2]) ** (1.0 / p[2])
    if code == 7:
        c = math.cosh(p[1] * r)
        return -p[0] / (c * c)
    if code == 8:
        n = tx.size
        if r <= tx[n - 1]:
            return np.interp(r, tx, ty)
        if p[0] == 0.0:
            return ty[n - 1]
        slope = (ty[n - 1] - ty[n - 2]) / (tx[n - 1] - tx[n - 2])
        return ty[n - 1] + slope * (r - tx[n - 1])
    return math.nan


@njit(cache=True)
def potential_array(code, p, tx, ty, r):
    out = np.empty(r.size)
    for i in range(r.size):
        out[i] = potential_value(code, p, tx, ty, r[i])
    return out


@dataclass(frozen=True)
class PotentialSpec:
    """A parameterised catalog potential.

    ``params`` holds the named parameters of ``kind`` (see ``KINDS``).
    ``user_tabulated`` instead takes ``x`` and ``v`` sequences plus a declared
    ``tail`` ("zero", "+inf" or "-inf"); classification cannot be inferred
    from a finite table.
    """

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PotentialError(f"unknown potential kind {self.kind!r}")
        params = dict(self.params)
        object.__setattr__(self, "params", params)
        if self.kind == "user_tabulated":
            self._validate_table(params)
            return
        names = KINDS[self.kind][1]
        missing = [n for n in names if n not in params]
        extra = [n for n in params if n not in names]
        if missing:
            raise PotentialError(f"{self.kind}: missing parameter(s) {missing}")
        if extra:
            raise PotentialError(f"{self.kind}: unknown parameter(s) {extra}")
        for n in names:
            val = float(params[n])
            if not math.isfinite(val):
                raise PotentialError(f"{self.kind}: parameter {n} must be finite")
            params[n] = val
        self._validate_ranges(params)

    def _validate_ranges(self, p):
        kind = self.kind
        if kind == "cutoff_coulomb" and p["a"] <= 0:
            raise PotentialError("cutoff_coulomb requires a > 0")
        if kind == "softcore" and (p["q"] < 1 or p["a"] <= 0):
            raise PotentialError("softcore requires q >= 1 and a > 0")
        if kind == "yukawa" and p["a"] < 0:
            raise PotentialError("yukawa requires a >= 0")
        if kind == "sech_squared" and p["b"] <= 0:
            raise PotentialError("sech_squared requires b > 0")
        if kind == "sine_modulated_harmonic" and p["beta"] < 0:
            raise PotentialError("sine_modulated_harmonic requires beta >= 0")

    @staticmethod
    def _validate_table(p):
        for key in ("x", "v", "tail"):
            if key not in p:
                raise PotentialError(f"user_tabulated: missing {key!r}")
        x = np.asarray(p["x"], dtype=float)
        v = np.asarray(p["v"], dtype=float)
        if x.ndim != 1 or x.size < 2 or x.shape != v.shape:
            raise PotentialError("user_tabulated: x and v must be equal-length 1D sequences")
        if x[0] != 0 or np.any(np.diff(x) <= 0):
            raise PotentialError("user_tabulated: x must start at 0 and increase")
        if not np.all(np.isfinite(v)):
            raise PotentialError("user_tabulated: values must be finite")
        if p["tail"] not in TAILS:
            raise PotentialError(f"user_tabulated: tail must be one of {TAILS}")
        p["x"] = tuple(float(t) for t in x)
        p["v"] = tuple(float(t) for t in v)

    # -- kernel packing ----------------------------------------------------

    @property
    def code(self) -> int:
        return KINDS[self.kind][0]

    def packed(self):
        """(code, params, table_x, table_y) as consumed by ``potential_value``."""
        if self.kind == "user_tabulated":
            tail = 0.0 if self.params["tail"] == "zero" else 1.0
            return (self.code, np.array([tail, 0.0, 0.0, 0.0]),
                    np.array(self.params["x"]), np.array(self.params["v"]))
        p = np.zeros(4)
        for i, n in enumerate(KINDS[self.kind][1]):
            p[i] = self.params[n]
        return self.code, p, _EMPTY, _EMPTY

    # -- analytic properties -------------------------------------------------

    @property
    def singular_at_origin(self) -> bool:
        return self.kind in ("coulomb", "yukawa") and self.coulomb_coefficient != 0.0

    @property
    def coulomb_coefficient(self) -> float:
        """c in V ~ c / r as r -> 0 (zero for potentials finite at the origin)."""
        if self.kind == "coulomb":
            return -self.params["beta"]
        if self.kind == "yukawa":
            return -self.params["alpha"]
        return 0.0

    def regular_part_at_origin(self) -> float:
        """lim_{r->0} (V(r) - c/r)."""
        if self.kind == "coulomb":
            return 0.0
        if self.kind == "yukawa":
            return self.params["alpha"] * self.params["a"]
        return float(evaluate(self, 0.0))

    def sign(self) -> int:
        """+1 if V >= 0 on (0, inf), -1 if V <= 0, 0 if V == 0, None if mixed."""
        p = self.params
        lead = {
            "zero": 0,
            "harmonic": np.sign(p.get("a", 0.0)),
            "sine_modulated_harmonic": np.sign(p.get("b", 0.0)),
            "coulomb": -np.sign(p.get("beta", 0.0)),
            "cutoff_coulomb": -np.sign(p.get("v", 0.0)),
            "yukawa": -np.sign(p.get("alpha", 0.0)),
            "softcore": -np.sign(p.get("alpha", 0.0)),
            "sech_squared": -np.sign(p.get("beta", 0.0)),
        }
        if self.kind == "user_tabulated":
            v = np.asarray(p["v"])
            if np.all(v == 0):
                return 0
            if np.all(v >= 0):
                return 1
            if np.all(v <= 0):
                return -1
            return None
        return int(lead[self.kind])

    def limit_at_infinity(self) -> float:
        """0.0, +inf or -inf."""
        p = self.params
        if self.kind == "user_tabulated":
            return {"zero": 0.0, "+inf": math.inf, "-inf": -math.inf}[p["tail"]]
        if self.kind == "harmonic":
            return math.copysign(math.inf, p["a"]) if p["a"] else 0.0
        if self.kind == "sine_modulated_harmonic":
            return math.copysign(math.inf, p["b"]) if p["b"] else 0.0
        return 0.0

    def scaled(self, factor: float) -> "PotentialSpec":
        """The same kind with its strength parameter multiplied by ``factor``."""
        strength = {"harmonic": "a", "sine_modulated_harmonic": "b", "coulomb": "beta",
                    "cutoff_coulomb": "v", "yukawa": "alpha", "softcore": "alpha",
                    "sech_squared": "beta"}
        if self.kind == "zero":
            return self
        if self.kind == "user_tabulated":
            tail = self.params["tail"]
            if factor < 0 and tail != "zero":
                tail = "-inf" if tail == "+inf" else "+inf"
            return PotentialSpec(self.kind, {**self.params, "tail": tail,
                                             "v": [factor * t for t in self.params["v"]]})
        key = strength[self.kind]
        return PotentialSpec(self.kind, {**self.params, key: factor * self.params[key]})

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        for k, v in self.params.items():
            out[k] = list(v) if isinstance(v, tuple) else v
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PotentialSpec":
        data = dict(data)
        kind = data.pop("kind")
        return cls(kind, data)


def evaluate(spec: PotentialSpec, r):
    """V(r) for scalar or array ``r >= 0``."""
    code, p, tx, ty = spec.packed()
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise PotentialError("potentials are evaluated at r >= 0 (use |x| in 1D)")
    if spec.singular_at_origin and np.any(arr == 0):
        raise PotentialError(f"{spec.kind} is singular at r = 0")
    if arr.ndim == 0:
        return float(potential_value(code, p, tx, ty, float(arr)))
    flat = potential_array(code, p, tx, ty, np.ascontiguousarray(arr.ravel()))
    return flat.reshape(arr.shape)


def classify(spec: PotentialSpec, mode: SymmetryMode) -> PotentialClass:
    """Asymptotic class of V under S = sV.

    class1: sV <= 0 and V -> 0; class2: sV >= 0 and V -> s*inf;
    class3: sV <= 0 and V -> -s*inf.
    """
    s = mode.s
    sign = spec.sign()
    limit = spec.limit_at_infinity()
    if sign is None:
        return PotentialClass.UNCLASSIFIED
    sv = s * sign
    if limit == 0.0:
        return PotentialClass.CLASS1 if sv <= 0 else PotentialClass.UNCLASSIFIED
    if limit == s * math.inf and sv >= 0:
        return PotentialClass.CLASS2
    if limit == -s * math.inf and sv <= 0:
        return PotentialClass.CLASS3
    return PotentialClass.UNCLASSIFIED


def energy_window(cls: PotentialClass, mode: SymmetryMode, m: float) -> tuple[float, float]:
    """Open interval of admissible bound-state energies for the class."""
    if m <= 0:
        raise ValueError("mass must be positive")
    if cls == PotentialClass.CLASS1:
        return (-m, m)
    if cls == PotentialClass.CLASS2:  # sE > m
        return (m, math.inf) if mode.s == 1 else (-math.inf, -m)
    if cls == PotentialClass.CLASS3:  # sE < -m
        return (-math.inf, -m) if mode.s == 1 else (m, math.inf)
    raise PotentialError("no energy window for an unclassified potential")


def difference(spec_a: PotentialSpec, spec_b: PotentialSpec):
    """Closure r -> V_b(r) - V_a(r), accepting scalars or arrays."""

    def diff(r):
        return evaluate(spec_b, r) - evaluate(spec_a, r)

    return diff
