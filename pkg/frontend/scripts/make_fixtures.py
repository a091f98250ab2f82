#!/usr/bin/env python3
"""Generate the fixture CSVs used by the rendering tests.

Runs the simulator CLI (the only coupling point) once per preset at a small
trial budget and keeps the output CSV if every (label, method) series ends
up with at least one plottable value.

Three presets carry a simulated series whose error rate is so low that only
the bottom of the SNR grid can produce events at the fixture budget;
whether it does is a coin flip decided by the master seed.  For those the
script pre-scans seeds with a cheap single-point CLI run that reproduces
the exact random stream of the at-risk series (the per-series stream seed
is master_seed + 1_000_003 * series_index + point_index, documented in the
manifest notes), then runs the full preset once with a seed that works.
"""

from __future__ import annotations

import argparse
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

HERE = Path(__file__).resolve().parent
FIXTURE_DIR = HERE.parent / "tests" / "fixtures"
sys.path.insert(0, str(HERE.parent / "src"))

from risfig.figspecs import FIGSPECS, PRESET_NAMES  # noqa: E402
from risfig.schema import load_results  # noqa: E402

DEFAULT_TRIALS = 20_000
HEAVY_TRIALS = 100_000
SERIES_STRIDE = 1_000_003

# preset -> (trials, at-risk series index, CLI args reproducing that series
# at the bottom grid point)
PRESCAN = {
    "fig4a": ("--n-elements", "256", "--li-level", "0.1", "--err", "fixed:0.1"),
    "fig5b": ("--n-elements", "256", "--li-level", "0.1", "--err", "perfect"),
    "fig6b": ("--n-elements", "256", "--li-level", "0.1", "--err", "perfect"),
}
AT_RISK_SERIES_INDEX = 3  # the deep series is the fourth one in each preset


def _cli(*args: str, out_dir: Path) -> None:
    cmd = [sys.executable, "-m", "rislab.cli", *args, "--out-dir", str(out_dir)]
    subprocess.run(cmd, check=True, capture_output=True, text=True)


def _prescan_seed(preset: str, trials: int, seeds: range) -> int:
    """Find a master seed whose at-risk series draws at least one event."""
    extra = PRESCAN[preset]
    for seed in seeds:
        stream_seed = seed + SERIES_STRIDE * AT_RISK_SERIES_INDEX
        with tempfile.TemporaryDirectory() as tmp:
            tmp_path = Path(tmp)
            _cli(
                "abep", *extra, "--snr-grid=-30", "--methods", "sim",
                "--trials", str(trials), "--seed", str(stream_seed),
                "--label", "prescan",
                out_dir=tmp_path,
            )
            (series,) = load_results(next(tmp_path.glob("*.csv")))
        if series.plottable(log_y=True):
            print(f"  {preset}: master seed {seed} gives events at the grid bottom")
            return seed
    raise RuntimeError(f"no working seed for {preset} in {seeds}")


def _generate(preset: str, base_seed: int) -> tuple[int, int]:
    spec = FIGSPECS[preset]
    trials = HEAVY_TRIALS if preset in PRESCAN else DEFAULT_TRIALS
    if preset in PRESCAN:
        seed = _prescan_seed(preset, trials, range(base_seed, base_seed + 40))
        seeds_to_try = [seed]
    else:
        seeds_to_try = list(range(base_seed, base_seed + 40))
    for seed in seeds_to_try:
        with tempfile.TemporaryDirectory() as tmp:
            tmp_path = Path(tmp)
            _cli("figure", preset, "--trials", str(trials), "--seed", str(seed),
                 out_dir=tmp_path)
            csv_path = tmp_path / spec.csv_name
            series_list = load_results(csv_path)
            ok = all(s.plottable(spec.yscale == "log") for s in series_list)
            if ok:
                FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
                shutil.copy(csv_path, FIXTURE_DIR / spec.csv_name)
                return trials, seed
        print(f"  {preset}: seed {seed} left an empty series, retrying")
    raise RuntimeError(f"no working seed for {preset}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--only", nargs="*", metavar="PRESET",
                        help="subset of presets to regenerate")
    parser.add_argument("--base-seed", type=int, default=11)
    args = parser.parse_args()

    names = args.only if args.only else PRESET_NAMES
    chosen: list[tuple[str, int, int]] = []
    for preset in names:
        trials, seed = _generate(preset, args.base_seed)
        chosen.append((preset, trials, seed))
        print(f"{preset}: kept (trials={trials}, seed={seed})")

    manifest = FIXTURE_DIR / "MANIFEST.txt"
    existing = {}
    if manifest.is_file():
        for line in manifest.read_text().splitlines():
            name, trials_s, seed_s = line.split(",")
            existing[name] = (int(trials_s), int(seed_s))
    for preset, trials, seed in chosen:
        existing[preset] = (trials, seed)
    manifest.write_text(
        "".join(f"{name},{t},{s}\n" for name, (t, s) in sorted(existing.items()))
    )
    print(f"wrote {manifest}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
