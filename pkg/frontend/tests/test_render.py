import sys

import matplotlib.pyplot as plt
import pytest
from PIL import Image

from risfig.figspecs import FIGSPECS, PRESET_NAMES, FigureSpec
from risfig.render import RenderError, build_figure, render
from risfig.schema import SchemaError, load_results
import risfig.cli as cli

HEADER = "snr_db,value,std_error,method,label"

ORDER_KIND_SNRS = 3  # the order-sweep fixtures carry three SNR points


def test_catalogue_has_all_presets():
    assert len(PRESET_NAMES) == 17
    linear = {name for name, spec in FIGSPECS.items() if spec.yscale == "linear"}
    assert linear == {"fig11a", "fig11b"}  # throughput is linear, the rest log


def test_importing_renderer_does_not_import_simulator():
    assert "risfig" in sys.modules
    assert "rislab" not in sys.modules


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_preset_renders_from_fixture(name, fixture_dir, golden_dir, tmp_path):
    spec = FIGSPECS[name]
    series_list = load_results(fixture_dir / spec.csv_name)
    assert len(series_list) == spec.expected_series

    fig = build_figure(spec, series_list)
    try:
        ax = fig.axes[0]
        assert ax.get_yscale() == spec.yscale
        if spec.kind == "order_bars":
            assert len(ax.containers) == ORDER_KIND_SNRS
            assert not ax.get_lines()
        elif spec.kind == "order_lines":
            assert len(ax.get_lines()) == ORDER_KIND_SNRS
        else:
            assert len(ax.get_lines()) == spec.expected_series
    finally:
        plt.close(fig)

    svg_path, png_path = render(spec, fixture_dir, tmp_path)
    svg = svg_path.read_bytes()
    assert svg.startswith(b"<?xml") and b"<svg" in svg[:400]
    with Image.open(png_path) as image:
        assert image.format == "PNG"
        assert image.width > 100 and image.height > 100

    golden = (golden_dir / f"{name}.svg").read_bytes()
    assert svg == golden, f"{name}: vector output drifted from golden file"


def test_rendering_same_input_twice_is_identical(fixture_dir, tmp_path):
    spec = FIGSPECS["fig4b"]
    first = render(spec, fixture_dir, tmp_path / "a")[0].read_bytes()
    second = render(spec, fixture_dir, tmp_path / "b")[0].read_bytes()
    assert first == second


def test_method_styles(fixture_dir):
    fig = build_figure(FIGSPECS["fig4b"],
                       load_results(fixture_dir / "fig4b.csv"))
    try:
        ax = fig.axes[0]
        handles, labels = ax.get_legend_handles_labels()
        by_method = {
            label.split("(")[-1].rstrip(")"): handle
            for handle, label in zip(handles, labels)
        }
        assert set(by_method) == {"sim", "exact", "upper", "asymptotic"}
        assert by_method["sim"].get_linestyle() == "None"
        assert by_method["sim"].get_marker() == "o"
        assert by_method["exact"].get_linestyle() == "-"
        assert by_method["upper"].get_linestyle() == "-."
        floor = by_method["asymptotic"]
        assert floor.get_linestyle() == "--"
        y_lo, y_hi = floor.get_ydata()
        assert y_lo == y_hi  # horizontal floor line
    finally:
        plt.close(fig)


def test_order_sweep_pivot(fixture_dir):
    fig = build_figure(FIGSPECS["fig3b"],
                       load_results(fixture_dir / "fig3b.csv"))
    try:
        ax = fig.axes[0]
        lines = ax.get_lines()
        assert len(lines) == ORDER_KIND_SNRS
        for line in lines:
            assert list(line.get_xdata()) == list(range(1, 11))
        assert {text for text in (line.get_label() for line in lines)} == {
            "-25 dB", "-23 dB", "-21 dB",
        }
    finally:
        plt.close(fig)

    fig = build_figure(FIGSPECS["fig3a"],
                       load_results(fixture_dir / "fig3a.csv"))
    try:
        ax = fig.axes[0]
        assert len(ax.containers) == ORDER_KIND_SNRS
        for container in ax.containers:
            assert len(container) == 9  # orders 2..10
    finally:
        plt.close(fig)


def test_zero_values_dropped_on_log_axis(tmp_path):
    spec = FigureSpec("custom", "t", ylim=(1e-6, 1.0), expected_series=1)
    csv = tmp_path / spec.csv_name
    csv.write_text(
        HEADER + "\n"
        "-10,1e-2,,exact,a\n"
        "-8,0.0,,exact,a\n"
        "-6,1e-3,,exact,a\n"
    )
    fig = build_figure(spec, load_results(csv))
    try:
        (line,) = fig.axes[0].get_lines()
        assert list(line.get_xdata()) == [-10.0, -6.0]
    finally:
        plt.close(fig)


def test_empty_csv_errors_and_writes_nothing(tmp_path):
    spec = FIGSPECS["fig4b"]
    in_dir = tmp_path / "in"
    out_dir = tmp_path / "out"
    in_dir.mkdir()
    (in_dir / spec.csv_name).write_text(HEADER + "\n")
    with pytest.raises(SchemaError, match="no data rows"):
        render(spec, in_dir, out_dir)
    assert not out_dir.exists()


def test_fully_absent_series_errors(tmp_path):
    spec = FigureSpec("custom", "t", expected_series=2)
    csv = tmp_path / spec.csv_name
    csv.write_text(
        HEADER + "\n"
        "-10,1e-2,,exact,a\n"
        "-10,,,sim,a\n"
        "-8,,,sim,a\n"
    )
    with pytest.raises(RenderError, match="no plottable points"):
        build_figure(spec, load_results(csv))


def test_cli_renders_preset(fixture_dir, tmp_path, capsys):
    rc = cli.main(["--preset", "fig9", "--in", str(fixture_dir), "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "fig9.svg").is_file()
    assert (tmp_path / "fig9.png").is_file()
    assert "fig9: wrote" in capsys.readouterr().out


def test_cli_renders_all(fixture_dir, tmp_path):
    rc = cli.main(["--preset", "all", "--in", str(fixture_dir), "--out", str(tmp_path)])
    assert rc == 0
    assert len(list(tmp_path.glob("*.svg"))) == 17
    assert len(list(tmp_path.glob("*.png"))) == 17


def test_cli_unknown_preset_exits_with_usage_error(tmp_path):
    with pytest.raises(SystemExit) as err:
        cli.main(["--preset", "fig99", "--in", str(tmp_path), "--out", str(tmp_path)])
    assert err.value.code == 2


def test_cli_missing_input_fails(tmp_path, capsys):
    rc = cli.main(["--preset", "fig9", "--in", str(tmp_path), "--out", str(tmp_path)])
    assert rc == 1
    assert "no such results file" in capsys.readouterr().err
    assert not (tmp_path / "fig9.svg").exists()
