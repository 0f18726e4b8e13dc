"""Randomised same-class comparison pairs for both symmetry modes.

    python scripts/property_sweep.py --pairs 200 --seed 20240 [--output sweep.json]
"""
import argparse
import json
import time

from diracrefine.sweeps import summarize, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20240)
    ap.add_argument("--output", "-o")
    args = ap.parse_args()

    report = {}
    for offset, s in enumerate((1, -1)):
        t0 = time.perf_counter()
        outcomes = sweep(s, args.pairs, args.seed + offset)
        stats = summarize(outcomes)
        stats["seconds"] = round(time.perf_counter() - t0, 1)
        stats["violating_pairs"] = [
            {"a": o.case.a.to_dict(), "b": o.case.b.to_dict(), "violations": o.violations}
            for o in outcomes if o.violations]
        report[f"s={s:+d}"] = stats
        print(f"s={s:+d}: {stats['pairs']} pairs, {stats['violations']} with violations, "
              f"max reduced delta {stats['max_reduced_delta']:.2e}, {stats['seconds']} s")
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
