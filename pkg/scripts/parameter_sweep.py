"""Ground-state energy of the d=2 Coulomb problem against its closed form.

Writes a CSV (beta, E_solver, E_closed, delta) and prints the worst deviation.

    python scripts/parameter_sweep.py --betas 0.02:0.45:24 --csv coulomb.csv
"""
import argparse
import csv

import numpy as np

from diracrefine.diracd import coulomb_exact_d2
from diracrefine.potentials import PotentialSpec
from diracrefine.problem import Problem


def parse_range(text):
    lo, hi, n = text.split(":")
    return np.linspace(float(lo), float(hi), int(n))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--betas", default="0.02:0.45:24", help="START:STOP:N")
    ap.add_argument("--mass", type=float, default=1.0)
    ap.add_argument("--csv")
    args = ap.parse_args()

    rows = []
    for beta in parse_range(args.betas):
        p = Problem(PotentialSpec("coulomb", {"beta": float(beta)}), args.mass, 2, 1,
                    j=0.5, tau=-1)
        E = p.solve().E
        # closed form is for m = 1; energies scale with m
        closed = args.mass * coulomb_exact_d2(float(beta)).E
        rows.append((float(beta), E, closed, E - closed))
        print(f"beta={beta:.4f}  E={E:.10f}  closed={closed:.10f}  delta={E - closed:+.2e}")
    print(f"worst |delta| = {max(abs(r[3]) for r in rows):.3e}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["beta", "E_solver", "E_closed", "delta"])
            w.writerows(rows)


if __name__ == "__main__":
    main()
