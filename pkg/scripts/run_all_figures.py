#!/usr/bin/env python3
"""Regenerate every figure preset's CSV + manifest.

Full budgets take a few hours on one core; --quick cuts the simulation to
10^4 symbols per point for a smoke run (analytic curves are unaffected).

    python3 scripts/run_all_figures.py --out-dir out
    python3 scripts/run_all_figures.py --quick
"""

import argparse
import sys
import time

from rislab.cli import PRESET_NAMES, main


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="out")
    ap.add_argument("--quick", action="store_true", help="10^4 symbols per point")
    ap.add_argument("--seed", type=int, help="master seed for the sim streams")
    ap.add_argument("--only", nargs="*", help="subset of preset names")
    return ap.parse_args()


if __name__ == "__main__":
    args = parse_args()
    names = args.only or PRESET_NAMES
    unknown = sorted(set(names) - set(PRESET_NAMES))
    if unknown:
        sys.exit(f"unknown presets: {unknown}")
    rc = 0
    for name in names:
        argv = ["figure", name, "--out-dir", args.out_dir]
        if args.quick:
            argv += ["--trials", "10000"]
        if args.seed is not None:
            argv += ["--seed", str(args.seed)]
        start = time.perf_counter()
        print(f"== {name} ==", flush=True)
        rc = max(rc, main(argv))
        print(f"   {time.perf_counter() - start:.1f} s", flush=True)
    sys.exit(rc)
