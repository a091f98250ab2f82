"""Per-preset figure specifications.

Each spec pins the input CSV name, the chart kind, axis scaling/limits,
and the number of (label, method) series the preset's CSV is documented
to contain.  The constants mirror the simulator's preset catalogue; this
package deliberately does not import the simulator to obtain them.
"""

from __future__ import annotations

from dataclasses import dataclass

ABEP_LABEL = "average bit error probability"
OUTAGE_LABEL = "outage probability"
THROUGHPUT_LABEL = "throughput (bits/symbol)"
SNR_LABEL = "SNR (dB)"
ORDER_LABEL = "quadrature order Q"

KINDS = ("curves", "order_lines", "order_bars")


@dataclass(frozen=True)
class FigureSpec:
    preset: str
    title: str
    kind: str = "curves"
    yscale: str = "log"
    xlabel: str = SNR_LABEL
    ylabel: str = ABEP_LABEL
    ylim: tuple[float, float] | None = None
    expected_series: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.yscale not in ("log", "linear"):
            raise ValueError(f"unknown yscale {self.yscale!r}")

    @property
    def csv_name(self) -> str:
        return f"{self.preset}.csv"


def _specs() -> dict[str, FigureSpec]:
    entries = (
        FigureSpec(
            "fig3a", "Quadrature convergence: change between adjacent orders",
            kind="order_bars", xlabel=ORDER_LABEL,
            ylabel="ABEP change between adjacent orders", expected_series=9,
        ),
        FigureSpec(
            "fig3b", "ABEP versus quadrature order",
            kind="order_lines", xlabel=ORDER_LABEL, expected_series=10,
        ),
        FigureSpec(
            "fig4a", "ABEP versus SNR for growing array sizes",
            ylim=(1e-6, 1.0), expected_series=8,
        ),
        FigureSpec(
            "fig4b", "Exact, upper bound, and asymptote against simulation",
            ylim=(1e-6, 1.0), expected_series=4,
        ),
        FigureSpec(
            "fig5a", "Fixed estimation error, small array",
            ylim=(1e-6, 1.0), expected_series=4,
        ),
        FigureSpec(
            "fig5b", "Fixed estimation error, large array, with floors",
            ylim=(1e-15, 1.0), expected_series=11,
        ),
        FigureSpec(
            "fig6a", "Pilot-driven estimation error, small array",
            ylim=(1e-6, 1.0), expected_series=4,
        ),
        FigureSpec(
            "fig6b", "Pilot-driven estimation error, large array",
            ylim=(1e-8, 1.0), expected_series=8,
        ),
        FigureSpec(
            "fig7a", "Loop-interference sweep against half duplex, N=9",
            ylim=(1e-5, 1.0), expected_series=4,
        ),
        FigureSpec(
            "fig7b", "Loop-interference sweep against half duplex, N=16",
            ylim=(1e-5, 1.0), expected_series=4,
        ),
        FigureSpec(
            "fig8a", "Full against half duplex, fixed estimation error",
            ylim=(1e-5, 1.0), expected_series=4,
        ),
        FigureSpec(
            "fig8b", "Full against half duplex, pilot-driven error",
            ylim=(1e-5, 1.0), expected_series=5,
        ),
        FigureSpec(
            "fig9", "Outage probability for two array sizes",
            ylabel=OUTAGE_LABEL, ylim=(1e-6, 1.5), expected_series=4,
        ),
        FigureSpec(
            "fig10a", "Outage under fixed estimation error",
            ylabel=OUTAGE_LABEL, ylim=(1e-6, 1.5), expected_series=8,
        ),
        FigureSpec(
            "fig10b", "Outage under pilot-driven estimation error",
            ylabel=OUTAGE_LABEL, ylim=(1e-6, 1.5), expected_series=8,
        ),
        FigureSpec(
            "fig11a", "Throughput versus SNR for growing array sizes",
            yscale="linear", ylabel=THROUGHPUT_LABEL, ylim=(0.0, 1.1),
            expected_series=6,
        ),
        FigureSpec(
            "fig11b", "Throughput versus SNR for two antenna-set sizes",
            yscale="linear", ylabel=THROUGHPUT_LABEL, ylim=(0.0, 2.2),
            expected_series=4,
        ),
    )
    return {spec.preset: spec for spec in entries}


FIGSPECS: dict[str, FigureSpec] = _specs()
PRESET_NAMES: tuple[str, ...] = tuple(sorted(FIGSPECS))
