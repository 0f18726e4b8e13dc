"""
Command-line front end.

    diracrefine solve CONFIG [--csv FILE] [--output FILE] [--dump-config]
    diracrefine compare A B [--strategy auto|T1|...]
    diracrefine transform A B --which g|p|rho|mu [--csv FILE]
    diracrefine reproduce ID|all
    diracrefine scan CONFIG --param NAME --values START:STOP:N [--csv FILE]

Exit codes: 0 success, 1 usage or config error, 2 solver failure (or a
failed reproduction value), 3 comparison-theorem falsification.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
import time

import numpy as np

from . import registry
from ._shooting import EigenvalueNotFound
from .diracd import node_structure
from .dirac1d import check_lemma1
from .diracd import check_lemma2
from .numerics import NumericsError
from .potentials import PotentialError, PotentialSpec
from .problem import ConfigError, Problem, dump_config, load_config, numerics_from_env
from .theorems import (HypothesisError, IncompatibleProblems, SelectorError, compare,
                       exact_coulomb_for, transform_g, transform_mu, transform_p, transform_rho)

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_FALSIFIED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    return obj


def _emit(doc: dict, path: str | None):
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def _state_doc(problem: Problem, state) -> dict:
    doc = {"problem": problem.to_dict(), "E": state.E, "nodes1": state.nodes1,
           "nodes2": state.nodes2, "norm": state.norm, "residual": state.residual,
           "mismatch": state.mismatch, "diagnostics": state.diagnostics}
    if problem.dimension == 1:
        ok, viol = check_lemma1(state, problem.mode)
        doc.update(x_max=state.x_max, potential_class=state.potential_class.value,
                   parity_vanishing=state.parity.which_vanishes_at_origin,
                   monotonicity={"holds": ok, "violation": viol})
    else:
        doc.update(r_max=state.r_max, k=problem.channel.k, gamma=state.gamma)
        if problem.mode is not None:
            ok, viol = check_lemma2(state, problem.mode)
            doc.update(potential_class=state.potential_class.value,
                       monotonicity={"holds": ok, "violation": viol},
                       node_structure=node_structure(state, problem.mode).to_dict())
    return doc


# -- subcommands ---------------------------------------------------------------


def _problem_from_flags(args) -> Problem:
    def params(items):
        out = {}
        for item in items or []:
            if "=" not in item:
                raise ConfigError(f"--param expects NAME=VALUE, got {item!r}")
            key, val = item.split("=", 1)
            try:
                out[key.strip()] = float(val)
            except ValueError:
                raise ConfigError(f"--param {key}: {val!r} is not a number") from None
        return out

    if args.kind is None or args.mass is None:
        raise ConfigError("give a CONFIG file or at least --kind and --mass")
    V = PotentialSpec(args.kind, params(args.param))
    S = PotentialSpec(args.scalar_kind, params(args.scalar_param)) if args.scalar_kind else None
    symmetry = None if S is not None else (args.symmetry if args.symmetry is not None else 1)
    return Problem(V, args.mass, args.dimension, symmetry, S, parity=args.parity,
                   j=args.j, tau=args.tau)


def _load_problem(args):
    if getattr(args, "config", None):
        return load_config(args.config)
    return _problem_from_flags(args), numerics_from_env()


def cmd_solve(args) -> int:
    problem, numerics = _load_problem(args)
    if args.dump_config:
        sys.stdout.write(dump_config(problem, numerics))
        return EXIT_OK
    t0 = time.perf_counter()
    state = problem.solve(numerics)
    doc = _state_doc(problem, state)
    doc["numerics"] = dataclasses.asdict(numerics)
    doc["timing"] = {"seconds": time.perf_counter() - t0}
    if args.csv:
        x = state.psi1.x if problem.radial else state.phi1.x
        a = state.psi1.values if problem.radial else state.phi1.values
        b = state.psi2.values if problem.radial else state.phi2.values
        _write_csv(args.csv, ["r", "psi1", "psi2"], zip(x, a, b))
        doc["csv"] = args.csv
    _emit(doc, args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    pa, numerics = load_config(args.a)
    pb, _ = load_config(args.b)
    t0 = time.perf_counter()
    report = compare(pa, pb, args.strategy, numerics)
    doc = {"a": pa.to_dict(), "b": pb.to_dict(), "report": report.to_dict(),
           "timing": {"seconds": time.perf_counter() - t0}}
    _emit(doc, args.output)
    if not report.consistent:
        print("FALSIFICATION: hypothesis satisfied but eigenvalues out of order",
              file=sys.stderr)
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_transform(args) -> int:
    pa, numerics = load_config(args.a)
    pb, _ = load_config(args.b)
    if (pa.dimension, pa.symmetry, pa.j, pa.tau) != (pb.dimension, pb.symmetry, pb.j, pb.tau):
        raise IncompatibleProblems("the two problems must share dimension, symmetry and channel")
    which = args.which
    if pa.mode is None:
        raise HypothesisError("transforms need S = sV problems")
    if which in ("g", "p") and pa.radial or which in ("rho", "mu") and not pa.radial:
        raise HypothesisError(f"transform {which} does not apply in dimension {pa.dimension}")
    t0 = time.perf_counter()
    R = args.r_max
    if which == "g":
        curve = transform_g(pa.potential, pb.potential, R)
    elif which == "rho":
        curve = transform_rho(pa.potential, pb.potential, pa.mode, pa.channel, R)
    elif which == "p":
        source = pb if args.weight_from == "b" else pa
        curve = transform_p(pa.potential, pb.potential, source.solve(numerics), pa.mode)
    else:
        source = pb if args.weight_from == "b" else pa
        weight = exact_coulomb_for(source) if args.exact else None
        if weight is None:
            weight = source.solve(numerics)
        curve = transform_mu(pa.potential, pb.potential, weight, pa.mode, pa.channel, R_max=R)
    doc = {"a": pa.to_dict(), "b": pb.to_dict(), "transform": curve.summary(),
           "crossing_points": curve.crossings[:50],
           "timing": {"seconds": time.perf_counter() - t0}}
    if args.csv:
        _write_csv(args.csv, ["x", "value"], zip(curve.curve.x, curve.curve.values))
        doc["csv"] = args.csv
    _emit(doc, args.output)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    t0 = time.perf_counter()
    results = registry.run(args.id)
    doc = {"experiments": [], "timing": {"seconds": time.perf_counter() - t0}}
    failed = False
    lines = []
    for rec, checks in results:
        doc["experiments"].append({"id": rec.id, "description": rec.description,
                                   "inputs": rec.inputs,
                                   "checks": [c.to_dict() for c in checks]})
        for c in checks:
            failed |= c.status == "FAIL"
            delta = "" if c.delta is None else f"  delta={c.delta:+.3e}"
            lines.append(f"{c.status:4s}  {rec.id:28s} {c.name:30s} "
                         f"expected={_short(c.expected):12s} measured={_short(c.measured)}{delta}")
    if args.output:
        _emit(doc, args.output)
    print("\n".join(lines))
    return EXIT_SOLVER if failed else EXIT_OK


def _short(v) -> str:
    return str(v) if isinstance(v, bool) else f"{float(v):.10g}"


def _parse_values(spec: str) -> np.ndarray:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError("--values expects START:STOP:N or a comma list")
        return np.linspace(float(parts[0]), float(parts[1]), int(parts[2]))
    return np.array([float(v) for v in spec.split(",") if v.strip()])


def cmd_scan(args) -> int:
    problem, numerics = load_config(args.config)
    values = _parse_values(args.values)
    target, _, name = args.param.rpartition(".")
    target = target or "potential"
    rows, entries = [], []
    t0 = time.perf_counter()
    for v in values:
        if target == "problem":
            p = dataclasses.replace(problem, **{name: float(v)})
        else:
            spec = getattr(problem, target)
            if spec is None or name not in spec.params:
                raise ConfigError(f"--param {args.param}: no such parameter")
            p = dataclasses.replace(problem, **{target: PotentialSpec(
                spec.kind, {**spec.params, name: float(v)})})
        try:
            E = p.solve(numerics).E
            status = "ok"
        except EigenvalueNotFound as exc:
            E, status = math.nan, str(exc)
        rows.append((v, E))
        entries.append({"value": float(v), "E": E, "status": status})
    if args.csv:
        _write_csv(args.csv, ["parameter", "E"], rows)
    _emit({"problem": problem.to_dict(), "parameter": args.param, "scan": entries,
           "timing": {"seconds": time.perf_counter() - t0}}, args.output)
    return EXIT_OK


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diracrefine", description=__doc__.split("\n\n")[0].strip())
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="ground state of one problem")
    s.add_argument("config", nargs="?")
    s.add_argument("--kind")
    s.add_argument("--param", action="append", metavar="NAME=VALUE")
    s.add_argument("--scalar-kind")
    s.add_argument("--scalar-param", action="append", metavar="NAME=VALUE")
    s.add_argument("--mass", type=float)
    s.add_argument("--dimension", type=int, default=1)
    s.add_argument("--symmetry", type=int, choices=(1, -1))
    s.add_argument("--parity", default="auto", choices=("auto", "1", "2"))
    s.add_argument("--j", type=float, default=0.5)
    s.add_argument("--tau", type=int, default=-1, choices=(1, -1))
    s.add_argument("--csv", help="wavefunction table (r, psi1, psi2)")
    s.add_argument("--output", "-o", help="JSON file (default stdout)")
    s.add_argument("--dump-config", action="store_true",
                   help="print the canonical config and exit")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("compare", help="comparison verdict for two problems")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--strategy", default="auto")
    c.add_argument("--output", "-o")
    c.set_defaults(func=cmd_compare)

    t = sub.add_parser("transform", help="sampled g, p, rho or mu curve")
    t.add_argument("a")
    t.add_argument("b")
    t.add_argument("--which", required=True, choices=("g", "p", "rho", "mu"))
    t.add_argument("--r-max", type=float)
    t.add_argument("--weight-from", choices=("a", "b"), default="a")
    t.add_argument("--exact", action="store_true",
                   help="use the closed-form Coulomb state as the mu weight when available")
    t.add_argument("--csv", help="curve table (x, value)")
    t.add_argument("--output", "-o")
    t.set_defaults(func=cmd_transform)

    r = sub.add_parser("reproduce", help="run registry experiments")
    r.add_argument("id", help=f"one of {list(registry.REGISTRY)} or 'all'")
    r.add_argument("--output", "-o", help="JSON report file")
    r.set_defaults(func=cmd_reproduce)

    sc = sub.add_parser("scan", help="eigenvalue versus one parameter")
    sc.add_argument("config")
    sc.add_argument("--param", required=True,
                    help="potential.NAME, scalar.NAME or problem.mass")
    sc.add_argument("--values", required=True, help="START:STOP:N or v1,v2,...")
    sc.add_argument("--csv")
    sc.add_argument("--output", "-o")
    sc.set_defaults(func=cmd_scan)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, PotentialError, IncompatibleProblems, SelectorError,
            HypothesisError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EigenvalueNotFound, NumericsError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
