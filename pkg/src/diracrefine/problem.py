"""
Problem specification and its INI-style config file.

    [problem]
    mass = 1.2
    dimension = 1          ; 1 or d >= 2
    symmetry = 1           ; s = +1 (spin) or -1 (pseudo-spin); omit with [scalar]
    parity = auto          ; 1D only: auto, 1 or 2 (component odd at the origin)
    j = 0.5                ; d >= 2 only
    tau = -1               ; d >= 2 only

    [potential]            ; vector potential V
    kind = harmonic
    a = 0.5

    [scalar]               ; optional independent scalar S (d >= 2)
    kind = coulomb
    beta = 0.7

    [numerics]             ; optional solver overrides
    abs_tol = 1e-11
    rel_tol = 1e-10
    eig_tol = 1e-10

Tabulated potentials take ``x`` and ``v`` as comma-separated lists and a
``tail`` of zero, +inf or -inf.
"""
from __future__ import annotations

import configparser
import dataclasses
import math
import os
import re
from dataclasses import dataclass
from typing import Any

from ._shooting import SolverConfig
from .diracd import Channel, solve_ground_radial
from .dirac1d import ParityChoice, solve_ground_1d
from .potentials import KINDS, PotentialError, PotentialSpec, SymmetryMode, classify

ENV_OVERRIDES = {"DIRACREFINE_ABS_TOL": "abs_tol", "DIRACREFINE_REL_TOL": "rel_tol",
                 "DIRACREFINE_EIG_TOL": "eig_tol"}

_PROBLEM_KEYS = {"mass", "dimension", "symmetry", "parity", "j", "tau"}
_NUMERIC_KEYS = {f.name for f in dataclasses.fields(SolverConfig)}


class ConfigError(ValueError):
    """Schema violation in a problem config; the message carries the line number."""


@dataclass(frozen=True)
class Problem:
    potential: PotentialSpec
    mass: float
    dimension: int = 1
    symmetry: int | None = 1
    scalar: PotentialSpec | None = None
    parity: str = "auto"
    j: float = 0.5
    tau: int = -1

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError("mass must be a positive finite number")
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ValueError("dimension must be a positive integer")
        if self.scalar is not None and self.symmetry is not None:
            raise ValueError("give either a symmetry s or an explicit scalar potential, not both")
        if self.scalar is None and self.symmetry not in (1, -1):
            raise ValueError("symmetry must be +1 or -1")
        if self.dimension == 1:
            if self.scalar is not None:
                raise ValueError("1D problems require S = sV (no independent scalar)")
            if str(self.parity) not in ("auto", "1", "2"):
                raise ValueError("parity must be auto, 1 or 2")
            object.__setattr__(self, "parity", str(self.parity))
        else:
            Channel(self.dimension, self.j, self.tau)

    @property
    def mode(self) -> SymmetryMode | None:
        return None if self.symmetry is None else SymmetryMode(self.symmetry)

    @property
    def channel(self) -> Channel | None:
        return None if self.dimension == 1 else Channel(self.dimension, self.j, self.tau)

    @property
    def radial(self) -> bool:
        return self.dimension > 1

    def potential_class(self):
        return None if self.mode is None else classify(self.potential, self.mode)

    def solve(self, config: SolverConfig | None = None):
        if self.dimension == 1:
            parity = "auto" if self.parity == "auto" else ParityChoice(int(self.parity))
            return solve_ground_1d(self.potential, self.mode, self.mass, parity, config)
        S = self.mode if self.scalar is None else self.scalar
        return solve_ground_radial(self.potential, S, self.mass, self.channel, config)

    def to_dict(self) -> dict:
        out = {"mass": self.mass, "dimension": self.dimension,
               "potential": self.potential.to_dict()}
        if self.scalar is None:
            out["symmetry"] = self.symmetry
        else:
            out["scalar"] = self.scalar.to_dict()
        if self.dimension == 1:
            out["parity"] = self.parity
        else:
            out.update(j=self.j, tau=self.tau, k=self.channel.k)
        return out


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _locate(text: str, section: str, key: str | None = None) -> int | None:
    """1-based line of ``key`` inside ``[section]`` (or of the header itself)."""
    current = None
    for n, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        m = re.match(r"\[([^\]]+)\]", stripped)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return n
            continue
        if current == section and key is not None:
            if re.match(rf"{re.escape(key)}\s*[=:]", stripped):
                return n
    return None


class _Reader:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"),
                                            interpolation=None)
        self.cp.optionxform = str
        try:
            self.cp.read_string(text, source=source)
        except configparser.DuplicateOptionError as exc:
            raise ConfigError(f"{source}:{exc.lineno}: duplicate key {exc.option!r} "
                              f"in [{exc.section}]") from None
        except configparser.DuplicateSectionError as exc:
            raise ConfigError(f"{source}:{exc.lineno}: duplicate section [{exc.section}]") from None
        except configparser.MissingSectionHeaderError as exc:
            raise ConfigError(f"{source}:{exc.lineno}: key outside of any [section]") from None
        except configparser.ParsingError as exc:
            lineno = exc.errors[0][0] if exc.errors else "?"
            raise ConfigError(f"{source}:{lineno}: unparsable line") from None

    def fail(self, msg, section, key=None):
        line = _locate(self.text, section, key)
        if line is None and key is not None:
            line = _locate(self.text, section)
        where = f"{self.source}:{line}" if line is not None else self.source
        raise ConfigError(f"{where}: {msg}")

    def require_section(self, name):
        if not self.cp.has_section(name):
            raise ConfigError(f"{self.source}: missing section [{name}]")
        return self.cp[name]

    def number(self, section, key, cast=float):
        raw = self.cp[section][key]
        try:
            val = cast(raw) if cast is not int else int(raw)
        except ValueError:
            self.fail(f"{key} = {raw!r} is not a valid {cast.__name__}", section, key)
        if isinstance(val, float) and not math.isfinite(val):
            self.fail(f"{key} must be finite", section, key)
        return val


def _parse_potential(reader: _Reader, section: str) -> PotentialSpec:
    sec = reader.require_section(section)
    if "kind" not in sec:
        reader.fail("missing key 'kind'", section)
    kind = sec["kind"].strip()
    if kind not in KINDS:
        reader.fail(f"unknown potential kind {kind!r}; expected one of {sorted(KINDS)}",
                    section, "kind")
    params: dict[str, Any] = {}
    for key in sec:
        if key == "kind":
            continue
        if kind == "user_tabulated" and key in ("x", "v"):
            try:
                params[key] = [float(t) for t in sec[key].split(",") if t.strip()]
            except ValueError:
                reader.fail(f"{key} must be a comma-separated list of numbers", section, key)
        elif kind == "user_tabulated" and key == "tail":
            params[key] = sec[key].strip()
        else:
            params[key] = reader.number(section, key)
    try:
        return PotentialSpec(kind, params)
    except PotentialError as exc:
        bad = next((k for k in params if k in str(exc)), None)
        reader.fail(str(exc), section, bad)


def numerics_from_env(base: SolverConfig | None = None) -> SolverConfig:
    cfg = base or SolverConfig()
    updates = {}
    for env, field_name in ENV_OVERRIDES.items():
        if env in os.environ:
            try:
                updates[field_name] = float(os.environ[env])
            except ValueError:
                raise ConfigError(f"environment {env}={os.environ[env]!r} is not a number") from None
    return dataclasses.replace(cfg, **updates)


def parse_config(text: str, source: str = "<config>") -> tuple[Problem, SolverConfig]:
    """Problem and solver settings from config text; raises ConfigError."""
    reader = _Reader(text, source)
    sec = reader.require_section("problem")
    for key in sec:
        if key not in _PROBLEM_KEYS:
            reader.fail(f"unknown key {key!r} in [problem]", "problem", key)
    if "mass" not in sec:
        reader.fail("missing required key 'mass'", "problem")
    for section in reader.cp.sections():
        if section not in ("problem", "potential", "scalar", "numerics"):
            reader.fail(f"unknown section [{section}]", section)
    mass = reader.number("problem", "mass")
    dimension = reader.number("problem", "dimension", int) if "dimension" in sec else 1
    potential = _parse_potential(reader, "potential")
    scalar = _parse_potential(reader, "scalar") if reader.cp.has_section("scalar") else None
    if scalar is None:
        symmetry = reader.number("problem", "symmetry", int) if "symmetry" in sec else None
        if symmetry is None:
            reader.fail("missing key 'symmetry' (or a [scalar] section)", "problem")
    else:
        if "symmetry" in sec:
            reader.fail("'symmetry' conflicts with the [scalar] section", "problem", "symmetry")
        symmetry = None
    kwargs: dict[str, Any] = {}
    if "parity" in sec:
        kwargs["parity"] = sec["parity"].strip()
    if "j" in sec:
        kwargs["j"] = reader.number("problem", "j")
    if "tau" in sec:
        kwargs["tau"] = reader.number("problem", "tau", int)
    try:
        problem = Problem(potential, mass, dimension, symmetry, scalar, **kwargs)
    except ValueError as exc:
        reader.fail(str(exc), "problem")
    numerics = {}
    if reader.cp.has_section("numerics"):
        for key in reader.cp["numerics"]:
            if key not in _NUMERIC_KEYS:
                reader.fail(f"unknown numerics key {key!r}", "numerics", key)
            cast = int if key in ("samples", "max_steps") else float
            numerics[key] = reader.number("numerics", key, cast)
    return problem, numerics_from_env(SolverConfig(**numerics))


def load_config(path: str) -> tuple[Problem, SolverConfig]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    return parse_config(text, source=path)


def _fmt(value) -> str:
    if isinstance(value, (list, tuple)):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _potential_lines(spec: PotentialSpec) -> list[str]:
    lines = [f"kind = {spec.kind}"]
    for key, val in spec.params.items():
        lines.append(f"{key} = {_fmt(val)}")
    return lines


def dump_config(problem: Problem, numerics: SolverConfig | None = None) -> str:
    """Config text that parses back to ``problem`` (and ``numerics``)."""
    out = ["[problem]", f"mass = {problem.mass!r}", f"dimension = {problem.dimension}"]
    if problem.symmetry is not None:
        out.append(f"symmetry = {problem.symmetry}")
    if problem.dimension == 1:
        out.append(f"parity = {problem.parity}")
    else:
        out += [f"j = {problem.j!r}", f"tau = {problem.tau}"]
    out += ["", "[potential]"] + _potential_lines(problem.potential)
    if problem.scalar is not None:
        out += ["", "[scalar]"] + _potential_lines(problem.scalar)
    if numerics is not None:
        out += ["", "[numerics]"]
        for f in dataclasses.fields(numerics):
            out.append(f"{f.name} = {getattr(numerics, f.name)!r}")
    return "\n".join(out) + "\n"
