#!/usr/bin/env python3
"""Render publication-style figures from the simulator's CSV/JSON outputs.

Reads only the documented file schemas (coefficient traces with their JSON
sidecars, and the spectrum table); no physics is recomputed here.  Layout:
coefficient figures show the damping and diffusion traces with horizontal
asymptote overlays and a short-time inset; the spectrum figure shows the
dimensionless vacuum spectral shape on a log axis.

    python render_figures.py --in <dir> --out <dir> [--format png|svg]
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

TRACE_COLUMNS = ["t", "gamma", "d1", "d2", "delta_m2"]
SIDECAR_KEYS = ["asymptotic_gamma", "asymptotic_d1", "overlay_gamma",
                "overlay_d1", "overlay_label"]


class SchemaError(RuntimeError):
    pass


def read_csv(path: Path) -> dict[str, np.ndarray]:
    if not path.exists():
        raise SchemaError(f"missing input file: {path}")
    lines = path.read_text().strip().splitlines()
    if len(lines) < 2:
        raise SchemaError(f"{path}: no data rows")
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return {h: data[:, j] for j, h in enumerate(header)}


def read_trace(csv_path: Path, json_path: Path):
    cols = read_csv(csv_path)
    for c in TRACE_COLUMNS:
        if c not in cols:
            raise SchemaError(f"{csv_path}: missing column {c!r} "
                              f"(have {sorted(cols)})")
    if not json_path.exists():
        raise SchemaError(f"missing sidecar: {json_path}")
    sidecar = json.loads(json_path.read_text())
    for k in SIDECAR_KEYS:
        if k not in sidecar:
            raise SchemaError(f"{json_path}: missing key {k!r}")
    return cols, sidecar


@dataclass
class FigureSpec:
    trace_csv: Path
    sidecar_json: Path
    output_path: Path
    inset_window: tuple[float, float] | None = None
    title: str = ""


def render_figure(spec: FigureSpec) -> Path:
    """Two-panel damping/diffusion figure with asymptote overlays and inset."""
    cols, meta = read_trace(spec.trace_csv, spec.sidecar_json)
    t = cols["t"]

    fig, axes = plt.subplots(2, 1, figsize=(6.0, 7.0), sharex=True)
    panels = [("gamma", "damping coefficient", meta["asymptotic_gamma"],
               meta["overlay_gamma"]),
              ("d1", "diffusion coefficient", meta["asymptotic_d1"],
               meta["overlay_d1"])]
    for ax, (col, label, asym, overlay) in zip(axes, panels):
        ax.plot(t, cols[col], lw=1.2, color="C0")
        ax.axhline(asym, color="C1", lw=1.0, label="asymptotic value")
        ax.axhline(overlay, color="C2", lw=1.0, ls="--",
                   label=meta["overlay_label"])
        ax.set_ylabel(label)
        ax.legend(loc="lower right", fontsize=8)
        if spec.inset_window is not None and len(t) > 4:
            lo, hi = spec.inset_window
            sel = (t >= lo) & (t <= hi)
            if sel.sum() > 2:
                ins = ax.inset_axes([0.45, 0.15, 0.42, 0.35])
                ins.plot(t[sel], cols[col][sel], lw=1.0, color="C0")
                ins.set_title("short times", fontsize=7)
                ins.tick_params(labelsize=6)
    axes[-1].set_xlabel("time  [1/$\\omega_0$]")
    if spec.title:
        axes[0].set_title(spec.title)
    fig.tight_layout()
    spec.output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)
    return spec.output_path


def render_spectrum(csv_path: Path, output_path: Path) -> Path:
    """Vacuum spectral shape zeta(u) on a logarithmic frequency axis."""
    cols = read_csv(csv_path)
    for c in ("u", "zeta"):
        if c not in cols:
            raise SchemaError(f"{csv_path}: missing column {c!r}")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogx(cols["u"], cols["zeta"], lw=1.4, color="C0")
    ax.set_xlabel("$\\omega/\\Omega$")
    ax.set_ylabel("spectral shape")
    ax.set_title("vacuum spectral density shape")
    fig.tight_layout()
    output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(output_path, dpi=150)
    plt.close(fig)
    return output_path


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="indir", required=True)
    ap.add_argument("--out", dest="outdir", required=True)
    ap.add_argument("--format", choices=("png", "svg"), default="png")
    args = ap.parse_args(argv)
    indir = Path(args.indir)
    outdir = Path(args.outdir)
    ext = args.format

    rendered = []
    try:
        for num, name, inset in (("1", "figure-1", (0.0, 0.01)),
                                 ("2", "figure-2", (0.0, 6.3))):
            csv_path = indir / f"coeffs_{name}.csv"
            if not csv_path.exists():
                continue
            spec = FigureSpec(csv_path, indir / f"coeffs_{name}.json",
                              outdir / f"figure{num}.{ext}",
                              inset_window=inset,
                              title=f"coefficient trace ({name})")
            rendered.append(render_figure(spec))
        spectrum = indir / "spectrum.csv"
        if spectrum.exists():
            rendered.append(render_spectrum(spectrum, outdir / f"figure3.{ext}"))
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    if not rendered:
        print(f"no renderable inputs found in {indir}", file=sys.stderr)
        return 1
    for p in rendered:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
