"""Secondary-component tests: schema round-trip plus a visual smoke test.

Inputs are generated through the primary package's CLI (its external
interface); nothing here imports the simulator internals.

Run with `pytest figures/` after installing the primary package.
"""

import json
import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))
from render_figures import (FigureSpec, SchemaError, main, read_trace,
                            render_figure, render_spectrum)


def _cli(out_dir: Path, payload: dict, command: list[str]) -> None:
    cfg = out_dir / "config.json"
    cfg.write_text(json.dumps(payload))
    res = subprocess.run(
        [sys.executable, "-m", "casimir_decoherence.cli",
         "--config", str(cfg), "--out", str(out_dir)] + command,
        capture_output=True, text=True)
    assert res.returncode == 0, res.stderr


@pytest.fixture(scope="module")
def cli_outputs(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli_out")
    _cli(out, {"preset": "figure-1", "t_max": 5.0, "n_times": 41}, ["coeffs"])
    _cli(out, {"preset": "figure-2", "t_max": 12.6, "n_times": 65}, ["coeffs"])
    _cli(out, {"n_points": 64}, ["spectrum"])
    return out


def test_schema_roundtrip(cli_outputs):
    cols, meta = read_trace(cli_outputs / "coeffs_figure-1.csv",
                            cli_outputs / "coeffs_figure-1.json")
    assert set(cols) == {"t", "gamma", "d1", "d2", "delta_m2"}
    assert meta["overlay_label"] == "perfect-reflection limit"
    assert len(cols["t"]) == 41


def test_render_all_figures(cli_outputs, tmp_path):
    code = main(["--in", str(cli_outputs), "--out", str(tmp_path)])
    assert code == 0
    for name in ("figure1.png", "figure2.png", "figure3.png"):
        f = tmp_path / name
        assert f.exists() and f.stat().st_size > 10_000


def test_rendering_is_idempotent(cli_outputs, tmp_path):
    spec = FigureSpec(cli_outputs / "coeffs_figure-1.csv",
                      cli_outputs / "coeffs_figure-1.json",
                      tmp_path / "fig.png", inset_window=(0.0, 0.5))
    first = render_figure(spec).read_bytes()
    second = render_figure(spec).read_bytes()
    assert first == second


def test_missing_column_aborts(tmp_path):
    bad = tmp_path / "coeffs_bad.csv"
    bad.write_text("t,gamma\n0.0,0.0\n1.0,1.0\n")
    side = tmp_path / "coeffs_bad.json"
    side.write_text("{}")
    with pytest.raises(SchemaError, match="missing column"):
        read_trace(bad, side)


def test_empty_trace_aborts(tmp_path):
    empty = tmp_path / "spectrum.csv"
    empty.write_text("u,zeta\n")
    with pytest.raises(SchemaError, match="no data rows"):
        render_spectrum(empty, tmp_path / "out.png")


def test_cli_reports_missing_inputs(tmp_path):
    code = main(["--in", str(tmp_path / "nowhere"), "--out", str(tmp_path)])
    assert code == 1
