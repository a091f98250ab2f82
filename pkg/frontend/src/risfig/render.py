"""Turning result CSVs into figures.

Styling is keyed on the ``method`` column: simulated points are drawn as
unfilled markers, analytic curves as solid lines, upper bounds dash-dotted,
and asymptotes as horizontal dashed floor lines.  Colors are keyed on the
``label`` column so that, e.g., a simulated curve lands on top of its
analytic counterpart in the same hue.

Rendering is deterministic: a fixed hash salt keeps SVG element ids stable
and the embedded creation date is suppressed, so identical CSV input yields
byte-identical SVG output.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from risfig.figspecs import FigureSpec
from risfig.schema import Series, load_results

_RC = {
    "svg.hashsalt": "risfig",
    "figure.figsize": (6.4, 4.8),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 8,
}

_METHOD_STYLE = {
    "sim": dict(linestyle="none", marker="o", markersize=4, fillstyle="none"),
    "exact": dict(linestyle="-", marker=""),
    "gcq": dict(linestyle="-", marker=""),
    "upper": dict(linestyle="-.", marker=""),
    "asymptotic": dict(linestyle="--", marker=""),
}

_PALETTE = plt.rcParams["axes.prop_cycle"].by_key()["color"]


class RenderError(ValueError):
    """The CSV content cannot be drawn as requested."""


def _color_by_label(series_list: tuple[Series, ...]) -> dict[str, str]:
    colors: dict[str, str] = {}
    for series in series_list:
        if series.label not in colors:
            colors[series.label] = _PALETTE[len(colors) % len(_PALETTE)]
    return colors


def _legend_name(series: Series, series_list: tuple[Series, ...]) -> str:
    methods = {s.method for s in series_list if s.label == series.label}
    if len(methods) > 1:
        return f"{series.label} ({series.method})"
    return series.label


def _draw_curves(ax: plt.Axes, spec: FigureSpec, series_list: tuple[Series, ...]) -> None:
    log_y = spec.yscale == "log"
    colors = _color_by_label(series_list)
    for series in series_list:
        points = series.plottable(log_y)
        if not points:
            raise RenderError(
                f"{spec.preset}: series ({series.label!r}, {series.method!r}) "
                "has no plottable points"
            )
        name = _legend_name(series, series_list)
        color = colors[series.label]
        if series.method == "asymptotic":
            ax.axhline(points[-1].value, color=color, label=name,
                       **_METHOD_STYLE["asymptotic"])
            continue
        ax.plot(
            [pt.snr_db for pt in points],
            [pt.value for pt in points],
            color=color,
            label=name,
            **_METHOD_STYLE[series.method],
        )
    ax.set_xlabel(spec.xlabel)


def _order_of(series: Series) -> int:
    prefix, sep, suffix = series.label.partition("=")
    if prefix.strip() != "Q" or not sep:
        raise RenderError(f"series label {series.label!r} does not encode an order")
    try:
        return int(suffix)
    except ValueError as exc:
        raise RenderError(f"series label {series.label!r} does not encode an order") from exc


def _pivot_by_snr(
    spec: FigureSpec, series_list: tuple[Series, ...]
) -> tuple[list[float], dict[float, dict[int, float]]]:
    """Reshape order-sweep series (one per Q, points per SNR) into one
    series per SNR with the order on the x axis."""
    log_y = spec.yscale == "log"
    per_snr: dict[float, dict[int, float]] = {}
    for series in series_list:
        order = _order_of(series)
        for pt in series.plottable(log_y):
            per_snr.setdefault(pt.snr_db, {})[order] = pt.value
    if not per_snr:
        raise RenderError(f"{spec.preset}: no plottable points in any series")
    return sorted(per_snr), per_snr


def _draw_order_lines(ax: plt.Axes, spec: FigureSpec, series_list: tuple[Series, ...]) -> None:
    snrs, per_snr = _pivot_by_snr(spec, series_list)
    for idx, snr in enumerate(snrs):
        by_order = per_snr[snr]
        orders = sorted(by_order)
        ax.plot(
            orders,
            [by_order[q] for q in orders],
            color=_PALETTE[idx % len(_PALETTE)],
            linestyle="-",
            marker="s",
            markersize=4,
            label=f"{snr:g} dB",
        )
    ax.set_xlabel(spec.xlabel)
    ax.xaxis.get_major_locator().set_params(integer=True)


def _draw_order_bars(ax: plt.Axes, spec: FigureSpec, series_list: tuple[Series, ...]) -> None:
    snrs, per_snr = _pivot_by_snr(spec, series_list)
    width = 0.8 / len(snrs)
    for idx, snr in enumerate(snrs):
        by_order = per_snr[snr]
        orders = sorted(by_order)
        offset = (idx - (len(snrs) - 1) / 2.0) * width
        ax.bar(
            [q + offset for q in orders],
            [by_order[q] for q in orders],
            width=width,
            color=_PALETTE[idx % len(_PALETTE)],
            label=f"{snr:g} dB",
        )
    ax.set_xlabel(spec.xlabel)
    ax.xaxis.get_major_locator().set_params(integer=True)


_DRAWERS = {
    "curves": _draw_curves,
    "order_lines": _draw_order_lines,
    "order_bars": _draw_order_bars,
}


def build_figure(spec: FigureSpec, series_list: tuple[Series, ...]) -> plt.Figure:
    """Build the matplotlib figure for ``spec`` from loaded series."""
    if not series_list:
        raise RenderError(f"{spec.preset}: no series to draw")
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots()
        _DRAWERS[spec.kind](ax, spec, series_list)
        ax.set_yscale(spec.yscale)
        if spec.ylim is not None:
            ax.set_ylim(*spec.ylim)
        ax.set_ylabel(spec.ylabel)
        ax.set_title(spec.title)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(loc="best")
        fig.tight_layout()
    return fig


def render(spec: FigureSpec, in_dir: str | Path, out_dir: str | Path) -> tuple[Path, Path]:
    """Render one preset's CSV to ``<preset>.svg`` and ``<preset>.png``.

    Nothing is written unless the input loads and draws cleanly.
    """
    in_dir = Path(in_dir)
    out_dir = Path(out_dir)
    series_list = load_results(in_dir / spec.csv_name)
    fig = build_figure(spec, series_list)
    out_dir.mkdir(parents=True, exist_ok=True)
    svg_path = out_dir / f"{spec.preset}.svg"
    png_path = out_dir / f"{spec.preset}.png"
    try:
        with matplotlib.rc_context(_RC):
            fig.savefig(svg_path, format="svg", metadata={"Date": None})
            fig.savefig(png_path, format="png")
    finally:
        plt.close(fig)
    return svg_path, png_path
