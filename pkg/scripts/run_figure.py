#!/usr/bin/env python3
"""Run a single figure preset and write its CSV + manifest.

Examples:
    python3 scripts/run_figure.py fig4b --trials 100000 --out-dir out
    python3 scripts/run_figure.py fig9 --methods exact
"""

import argparse
import sys

from rislab.cli import PRESET_NAMES, main


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("preset", choices=PRESET_NAMES)
    ap.add_argument("--trials", type=int, help="simulated symbols per point (default 10^6)")
    ap.add_argument("--seed", type=int, help="master seed for the sim streams")
    ap.add_argument("--methods", help="comma subset, e.g. sim,exact")
    ap.add_argument("--out-dir", default="out")
    return ap.parse_args()


if __name__ == "__main__":
    args = parse_args()
    argv = ["figure", args.preset, "--out-dir", args.out_dir]
    if args.trials is not None:
        argv += ["--trials", str(args.trials)]
    if args.seed is not None:
        argv += ["--seed", str(args.seed)]
    if args.methods:
        argv += ["--methods", args.methods]
    sys.exit(main(argv))
