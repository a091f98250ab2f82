"""Command line entry point: ``render --preset <name> --in <dir> --out <dir>``."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from risfig.figspecs import FIGSPECS, PRESET_NAMES
from risfig.render import RenderError, render
from risfig.schema import SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render simulator result CSVs into SVG and PNG figures.",
    )
    parser.add_argument(
        "--preset",
        required=True,
        choices=PRESET_NAMES + ("all",),
        help="figure preset to render, or 'all'",
    )
    parser.add_argument("--in", dest="in_dir", required=True, metavar="DIR",
                        help="directory holding <preset>.csv")
    parser.add_argument("--out", dest="out_dir", required=True, metavar="DIR",
                        help="directory to write <preset>.svg and <preset>.png")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    names = PRESET_NAMES if args.preset == "all" else (args.preset,)
    status = 0
    for name in names:
        try:
            svg_path, png_path = render(FIGSPECS[name], args.in_dir, args.out_dir)
        except (SchemaError, RenderError) as exc:
            print(f"{name}: {exc}", file=sys.stderr)
            status = 1
            continue
        print(f"{name}: wrote {svg_path} and {png_path}")
    return status


if __name__ == "__main__":
    sys.exit(main())
