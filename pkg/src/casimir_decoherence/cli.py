"""Command-line front end: deterministic CSV/JSON artifacts for each subsystem.

Subcommands: spectrum | coeffs | evolve | sieve | pairs | thermal | figures.
All parameters come from a JSON config (--config); --out picks the output
directory; --threads (or CASIMIR_DECOHERENCE_THREADS) controls trace
parallelism.  Exit codes: 0 success, 2 config error, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import coefficients, entropy, pairs, phasespace, spectral, thermal
from .config import PhysicalConfig, QuadOptions, ConvergenceError
from .io_utils import write_csv, write_json


class ConfigError(ValueError):
    pass


_POSITIVE_KEYS = {"mass", "oscillator_frequency", "transparency_frequency",
                  "hbar", "speed_of_light"}


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        payload = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(payload, dict):
        raise ConfigError("config root must be a JSON object")
    return payload


def _physical(cfgd: dict) -> PhysicalConfig:
    kwargs = {}
    for key in ("mass", "oscillator_frequency", "transparency_frequency",
                "temperature", "hbar", "speed_of_light"):
        if key in cfgd:
            val = cfgd[key]
            if not isinstance(val, (int, float)):
                raise ConfigError(f"{key} must be a number, got {val!r}")
            if key in _POSITIVE_KEYS and val <= 0:
                raise ConfigError(f"{key} must be > 0, got {val}")
            if key == "temperature" and val < 0:
                raise ConfigError(f"temperature must be >= 0, got {val}")
            kwargs[key] = float(val)
    try:
        return PhysicalConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc))


def _require(cfgd: dict, key: str, typ, default=None):
    if key not in cfgd:
        if default is not None:
            return default
        raise ConfigError(f"missing required config key {key!r}")
    val = cfgd[key]
    if typ is float and isinstance(val, int):
        val = float(val)
    if not isinstance(val, typ):
        raise ConfigError(f"config key {key!r} must be {typ}, got {val!r}")
    return val


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_spectrum(cfgd: dict, out: Path, threads: int) -> None:
    cfg = _physical(cfgd)
    n = int(_require(cfgd, "n_points", int, 512))
    if n < 2:
        raise ConfigError("n_points must be >= 2")
    u = np.geomspace(1e-2, 1e2, n)
    zvals = np.array([spectral.zeta(ui) for ui in u])
    write_csv(out / "spectrum.csv", ["u", "zeta"], [u, zvals])

    freqs = cfgd.get("frequencies")
    if freqs is not None:
        if not isinstance(freqs, list) or len(freqs) == 0:
            raise ConfigError("frequencies must be a non-empty list")
        freqs = np.asarray(freqs, dtype=float)
        if np.any(freqs <= 0):
            raise ConfigError("frequencies must all be > 0")
    else:
        freqs = cfg.oscillator_frequency * np.geomspace(1e-2, 1e2, n)
    table = spectral.build_spectral_table(cfg, freqs)
    write_csv(out / "spectral_table.csv", ["omega", "xi", "sigma"],
              [table.frequencies, table.xi_values, table.sigma_values])
    write_json(out / "spectrum_meta.json", {
        "config": cfg.as_dict(),
        "tail_exponent": table.tail_exponent,
        "zeta_peak_u": float(u[np.argmax(zvals)]),
    })


_FIGURE_PRESETS = {
    "figure-1": {"transparency_frequency": 1e4},
    "figure-2": {"transparency_frequency": 1e-4},
}


def cmd_coeffs(cfgd: dict, out: Path, threads: int) -> None:
    preset = cfgd.get("preset")
    if preset is not None:
        if preset not in _FIGURE_PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; "
                              f"choose from {sorted(_FIGURE_PRESETS)}")
        merged = dict(cfgd)
        merged.update(_FIGURE_PRESETS[preset])
        cfgd = merged
    cfg = _physical(cfgd)
    w0 = cfg.oscillator_frequency
    t_max = float(_require(cfgd, "t_max", float, 20.0 * 2.0 * np.pi / w0))
    n_t = int(_require(cfgd, "n_times", int, 513))
    if t_max < 0:
        raise ConfigError("t_max must be >= 0")
    times = np.linspace(0.0, t_max, n_t) if t_max > 0 else np.array([0.0])
    trace = coefficients.coefficient_trace(cfg, times, threads=threads)
    if trace.quad_failures:
        raise ConvergenceError(
            f"{len(trace.quad_failures)} trace points failed: "
            f"{trace.quad_failures[:3]}", np.nan, np.nan)
    name = preset or "trace"
    trace.to_csv(out / f"coeffs_{name}.csv")
    sidecar = trace.sidecar()
    # caption formulas for asymptote overlays
    hbar, M, Om = cfg.hbar, cfg.mass, cfg.transparency_frequency
    if Om >= w0:
        sidecar["overlay_gamma"] = hbar * w0**2 / (12.0 * np.pi * M)
        sidecar["overlay_d1"] = hbar**2 * w0 / (12.0 * np.pi * M**2)
        sidecar["overlay_label"] = "perfect-reflection limit"
    else:
        sidecar["overlay_gamma"] = hbar * Om**2 * np.log(w0 / Om) / (2.0 * np.pi * M)
        sidecar["overlay_d1"] = (hbar**2 * Om**2 * np.log(w0 / Om)
                                 / (2.0 * np.pi * M**2 * w0))
        sidecar["overlay_label"] = "high-transmission limit"
    write_json(out / f"coeffs_{name}.json", sidecar)


def cmd_evolve(cfgd: dict, out: Path, threads: int) -> None:
    cfg = _physical(cfgd)
    alpha = _require(cfgd, "alpha", float, 3.0)
    gamma = _require(cfgd, "gamma", float, 1e-3)
    if gamma < 0:
        raise ConfigError("gamma must be >= 0")
    d1 = _require(cfgd, "d1", float,
                  cfg.hbar * gamma / (cfg.mass * cfg.oscillator_frequency))
    d2 = _require(cfgd, "d2", float, 0.0)
    n_periods = _require(cfgd, "n_periods", float, 10.0)
    nx = int(_require(cfgd, "grid_size", int, 256))
    mixture_only = bool(cfgd.get("mixture_only", False))

    spec = phasespace.CatStateSpec(alpha)
    grid_params = phasespace.GridParams(nx=nx, np_=nx)
    coeffs = phasespace.FPCoefficients(gamma, d1, d2)
    period = 2.0 * np.pi / cfg.oscillator_frequency
    t_final = n_periods * period
    opts = phasespace.SolverOptions()

    mix0 = phasespace.cat_wigner(
        phasespace.CatStateSpec(alpha, parity="mixture"), grid_params, cfg)
    mix_traj = phasespace.evolve_fokker_planck(mix0, coeffs, t_final, cfg, opts)
    if mixture_only:
        cat_traj = phasespace.evolve_fokker_planck(mix0.copy(), coeffs,
                                                   t_final, cfg, opts)
    else:
        cat0 = phasespace.cat_wigner(spec, grid_params, cfg)
        cat_traj = phasespace.evolve_fokker_planck(cat0, coeffs, t_final, cfg, opts)

    P0 = spec.momentum(cfg)
    rate_pred = 2.0 * P0**2 * d1 / cfg.hbar**2 if d1 > 0 else 0.0
    t_d_pred = 1.0 / rate_pred if rate_pred > 0 else None
    series = phasespace.coherence_factor(cat_traj, mix_traj, spec, cfg, t_d_pred)
    series.to_csv(out / "coherence.csv")
    phasespace.write_snapshot(cat_traj.snapshots[-1], cat_traj.times[-1], cfg,
                              out / "snapshot_final.csv",
                              out / "snapshot_final.json")
    write_json(out / "evolve_summary.json", {
        "config": cfg.as_dict(),
        "alpha": alpha, "gamma": gamma, "d1": d1, "d2": d2,
        "fitted_rate": series.fit_rate,
        "fit_residual": series.fit_residual,
        "flagged": series.flagged,
        "predicted_rate": rate_pred,
        "rate_ratio": series.fit_rate / rate_pred if rate_pred > 0 else None,
        "leakage_flagged": cat_traj.leakage_flagged,
    })


def cmd_sieve(cfgd: dict, out: Path, threads: int) -> None:
    cfg = _physical(cfgd)
    gamma = _require(cfgd, "gamma", float, 1e-3)
    d1 = _require(cfgd, "d1", float,
                  cfg.hbar * gamma / (cfg.mass * cfg.oscillator_frequency))
    n_periods = _require(cfgd, "n_periods", float, 20.0)
    objective = _require(cfgd, "objective", str, "analytic")
    tau = n_periods * 2.0 * np.pi / cfg.oscillator_frequency
    coeffs = phasespace.FPCoefficients(gamma, d1, 0.0)
    result = entropy.sieve_minimize(coeffs, tau, cfg, objective=objective)
    result.scan_to_csv(out / "sieve_scan.csv")
    result.to_json(out / "sieve_result.json")


def cmd_pairs(cfgd: dict, out: Path, threads: int) -> None:
    cfg = _physical(cfgd)
    qdot0 = _require(cfgd, "qdot0", float, 1e-3)
    w0dt = _require(cfgd, "omega0_dt", float, 400.0)
    run = pairs.PairRun(cfg.oscillator_frequency, qdot0,
                        w0dt / cfg.oscillator_frequency,
                        hbar=cfg.hbar, mass=cfg.mass)
    run.export_csv(out / "pair_spectrum.csv")
    pairs.write_run_summary(run, out / "pairs_summary.json")


def cmd_thermal(cfgd: dict, out: Path, threads: int) -> None:
    temps = cfgd.get("temperatures_kelvin", [50.0, 300.0])
    if not isinstance(temps, list) or not temps or any(
            not isinstance(t, (int, float)) or t <= 0 for t in temps):
        raise ConfigError("temperatures_kelvin must be a list of positive numbers")
    area = _require(cfgd, "area_m2", float, 1e-6)
    mass = _require(cfgd, "mass_kg", float, 1e-6)
    delta_q = cfgd.get("delta_q_m")
    thermal.tabulate_si(temps, area, mass, out / "thermal_table.csv")
    reports = [thermal.plate_decoherence_time(T, area, delta_q, mass).__dict__
               for T in temps]
    write_json(out / "thermal_reports.json", {"reports": reports})


def cmd_figures(which: str, cfgd: dict, out: Path, threads: int) -> None:
    if which == "1":
        cmd_coeffs({**cfgd, "preset": "figure-1"}, out, threads)
    elif which == "2":
        cmd_coeffs({**cfgd, "preset": "figure-2"}, out, threads)
    elif which == "3":
        cmd_spectrum(cfgd, out, threads)
    else:
        raise ConfigError(f"figures takes 1, 2 or 3, got {which!r}")


# ---------------------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="casimir-decoherence",
        description="radiation-pressure decoherence toolkit")
    parser.add_argument("--config", default=None, help="JSON parameter file")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--threads", type=int, default=None)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "coeffs", "evolve", "sieve", "pairs", "thermal"):
        sub.add_parser(name)
    fig = sub.add_parser("figures")
    fig.add_argument("which", choices=["1", "2", "3"])

    args = parser.parse_args(argv)
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("CASIMIR_DECOHERENCE_THREADS", "1"))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    handlers = {
        "spectrum": cmd_spectrum,
        "coeffs": cmd_coeffs,
        "evolve": cmd_evolve,
        "sieve": cmd_sieve,
        "pairs": cmd_pairs,
        "thermal": cmd_thermal,
    }
    try:
        cfgd = _load_config(args.config)
        if args.command == "figures":
            cmd_figures(args.which, cfgd, out, threads)
        else:
            handlers[args.command](cfgd, out, threads)
    except ConvergenceError as exc:
        print(f"numerical convergence failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
