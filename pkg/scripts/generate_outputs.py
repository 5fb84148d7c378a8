#!/usr/bin/env python3
"""Drive every CLI subcommand with its default preset into one output tree.

Produces the CSV/JSON inputs consumed by figures/render_figures.py.

    python scripts/generate_outputs.py --out output/
"""

import argparse
import json
import sys
import tempfile
from pathlib import Path

from casimir_decoherence.cli import main as cli_main

RUNS = [
    ("figure-1 coefficient trace", {"preset": "figure-1", "t_max": 20.0,
                                    "n_times": 201}, ["coeffs"]),
    ("figure-2 coefficient trace", {"preset": "figure-2",
                                    "t_max": 8 * 6.283185307179586,
                                    "n_times": 513}, ["coeffs"]),
    ("vacuum spectrum", {"n_points": 512}, ["spectrum"]),
    ("cat evolution", {"alpha": 3.0, "gamma": 1e-3, "n_periods": 10.0},
     ["evolve"]),
    ("pointer sieve", {"gamma": 1e-3}, ["sieve"]),
    ("photon pairs", {"qdot0": 1e-3, "omega0_dt": 400.0}, ["pairs"]),
    ("thermal plate", {"temperatures_kelvin": [50.0, 100.0, 300.0],
                       "area_m2": 1e-6, "mass_kg": 1e-9}, ["thermal"]),
]


def run(out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, payload, command in RUNS:
        print(f"== {name}")
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
            json.dump(payload, fh)
            cfg_path = fh.name
        code = cli_main(["--config", cfg_path, "--out", str(out_dir)] + command)
        if code != 0:
            print(f"   failed with exit code {code}", file=sys.stderr)
            return code
    print(f"all outputs in {out_dir}/")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="output")
    args = ap.parse_args()
    sys.exit(run(Path(args.out)))
