"""Reading and validating the simulator's result CSVs.

The documented schema is a header row ``snr_db,value,std_error,method,label``
followed by one row per (series, grid point).  ``value`` and ``std_error``
may be empty, meaning the point is absent (e.g. a simulated deep-tail point
with no observed events).  Rows belonging to one series share the same
(label, method) pair.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

COLUMNS = ("snr_db", "value", "std_error", "method", "label")
METHODS = ("sim", "exact", "gcq", "upper", "asymptotic")


class SchemaError(ValueError):
    """The input file does not match the documented CSV schema."""


@dataclass(frozen=True)
class Point:
    """One grid point of one series; ``value is None`` means absent."""

    snr_db: float
    value: float | None
    std_error: float | None


@dataclass(frozen=True)
class Series:
    """All points sharing one (label, method) pair, in file order."""

    label: str
    method: str
    points: tuple[Point, ...]

    def plottable(self, log_y: bool) -> tuple[Point, ...]:
        """Points that can be drawn: absent dropped, and on a log axis
        nonpositive values dropped as well."""
        kept = []
        for pt in self.points:
            if pt.value is None or math.isnan(pt.value):
                continue
            if log_y and pt.value <= 0.0:
                continue
            kept.append(pt)
        return tuple(kept)


def _parse_float(text: str, column: str, row_num: int) -> float | None:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError as exc:
        raise SchemaError(f"row {row_num}: bad {column} value {text!r}") from exc


def load_results(path: str | Path) -> tuple[Series, ...]:
    """Load one result CSV into series, preserving file order.

    Raises SchemaError for a missing file, a wrong header, an unknown
    method, unparsable numbers, or a file with no data rows.
    """
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"no such results file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name}: empty file") from None
        if tuple(header) != COLUMNS:
            raise SchemaError(
                f"{path.name}: header {header!r} does not match {','.join(COLUMNS)}"
            )
        order: list[tuple[str, str]] = []
        groups: dict[tuple[str, str], list[Point]] = {}
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(COLUMNS):
                raise SchemaError(f"{path.name}: row {row_num} has {len(row)} fields")
            snr_text, value_text, err_text, method, label = row
            snr_db = _parse_float(snr_text, "snr_db", row_num)
            if snr_db is None:
                raise SchemaError(f"{path.name}: row {row_num} has empty snr_db")
            if method not in METHODS:
                raise SchemaError(f"{path.name}: row {row_num} unknown method {method!r}")
            key = (label, method)
            if key not in groups:
                order.append(key)
                groups[key] = []
            groups[key].append(
                Point(
                    snr_db=snr_db,
                    value=_parse_float(value_text, "value", row_num),
                    std_error=_parse_float(err_text, "std_error", row_num),
                )
            )
    if not groups:
        raise SchemaError(f"{path.name}: no data rows")
    return tuple(
        Series(label=label, method=method, points=tuple(groups[(label, method)]))
        for label, method in order
    )
