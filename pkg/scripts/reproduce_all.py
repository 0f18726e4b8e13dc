"""Run every registry experiment and print PASS/FAIL/INFO per expected value.

    python scripts/reproduce_all.py [--output report.json]
"""
import argparse
import sys

from diracrefine import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--output", "-o")
    args = ap.parse_args()
    argv = ["reproduce", "all"] + (["--output", args.output] if args.output else [])
    return cli.main(argv)


if __name__ == "__main__":
    sys.exit(main())
