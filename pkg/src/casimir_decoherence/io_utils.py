"""Deterministic CSV/JSON writers shared by the modules and the CLI."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def fmt(x: float) -> str:
    """Fixed 17-significant-digit decimal formatting (byte-stable across runs)."""
    return f"{float(x):.16e}"


def write_csv(path: str | Path, header: list[str], columns: list[np.ndarray]) -> None:
    cols = [np.atleast_1d(np.asarray(c, dtype=float)) for c in columns]
    n = len(cols[0])
    if any(len(c) != n for c in cols):
        raise ValueError("all columns must have equal length")
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(fmt(c[i]) for c in cols))
    Path(path).write_text("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON serializable: {type(obj)}")


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n")


def read_csv_columns(path: str | Path) -> dict[str, np.ndarray]:
    text = Path(path).read_text().strip().splitlines()
    header = text[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    if data.size == 0:
        return {h: np.array([]) for h in header}
    return {h: data[:, j] for j, h in enumerate(header)}
