#!/usr/bin/env python3
"""Regenerate the golden SVGs from the checked-in fixture CSVs.

Run this after an intentional rendering change, then review the image
diffs before committing the new goldens.
"""

from __future__ import annotations

import shutil
import sys
import tempfile
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent / "src"))

from risfig.figspecs import FIGSPECS, PRESET_NAMES  # noqa: E402
from risfig.render import render  # noqa: E402

FIXTURE_DIR = HERE.parent / "tests" / "fixtures"
GOLDEN_DIR = HERE.parent / "tests" / "golden"


def main() -> int:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        for name in PRESET_NAMES:
            svg_path, _ = render(FIGSPECS[name], FIXTURE_DIR, tmp)
            shutil.copy(svg_path, GOLDEN_DIR / svg_path.name)
            print(f"{name}: golden updated")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
