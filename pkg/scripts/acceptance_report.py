#!/usr/bin/env python3
"""Run the acceptance gate and print one line per criterion.

    python3 scripts/acceptance_report.py            # full gate (~25 min)
    python3 scripts/acceptance_report.py --fast     # skip the Monte Carlo criteria
"""

import argparse
import subprocess
import sys

FAST_DESELECT = [
    "--deselect", "tests/test_acceptance.py::test_02_error_floor_monte_carlo_confirmation",
    "--deselect", "tests/test_acceptance.py::test_04_sim_vs_analytic_agreement_large_array",
    "--deselect", "tests/test_acceptance.py::test_06_outage_closed_form_vs_simulation",
    "--deselect", "tests/test_acceptance.py::test_09_full_duplex_beats_half_duplex_at_grid_top",
]

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fast", action="store_true", help="analytic criteria only")
    args = ap.parse_args()
    cmd = [sys.executable, "-m", "pytest", "tests/test_acceptance.py", "-v", "--no-header"]
    if args.fast:
        cmd += FAST_DESELECT
    sys.exit(subprocess.call(cmd))
