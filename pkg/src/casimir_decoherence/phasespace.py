"""Cat-state Wigner functions and their Fokker-Planck evolution.

The master equation acts on the Wigner function as

    dW/dt = -(1 - dM/M)(p/M) dW/dx + M w0^2 x dW/dp
            + 2 Gamma d/dx (x W) + D1 d^2W/dx^2 - D2 d^2W/dxdp

The solver is a Strang splitting built so the dominant harmonic rotation is
numerically dissipation-free: the linear drift is applied exactly as three
FFT shears (pure spectral phases, so fringe amplitudes are untouched), the
constant-coefficient diffusion is an exact Fourier multiplier, and the small
position-damping term is an explicit RK4 step in flux form.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .config import PhysicalConfig
from .io_utils import write_csv, write_json


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

def ground_state_widths(cfg: PhysicalConfig) -> tuple[float, float]:
    """(dq0, dp0) of the oscillator ground state."""
    dq0 = np.sqrt(cfg.hbar / (2.0 * cfg.mass * cfg.oscillator_frequency))
    return dq0, cfg.hbar / (2.0 * dq0)


@dataclass(frozen=True)
class CatStateSpec:
    """Superposition (|alpha> + |-alpha>)/sqrt(2) with alpha on the momentum axis.

    P0 = sqrt(2 M hbar w0) |alpha| is the momentum of each component.
    parity 'mixture' drops the interference term (the classical reference state).
    """

    alpha: complex
    parity: str = "even"

    def __post_init__(self):
        if self.parity not in ("even", "odd", "mixture"):
            raise ValueError(f"parity must be even|odd|mixture, got {self.parity!r}")
        if abs(self.alpha) < 2.0:
            warnings.warn(f"|alpha| = {abs(self.alpha):.3g} < 2: components overlap "
                          "and the separated-packet picture degrades")

    def momentum(self, cfg: PhysicalConfig) -> float:
        return np.sqrt(2.0 * cfg.mass * cfg.hbar * cfg.oscillator_frequency) * abs(self.alpha)


@dataclass
class GaussianState:
    """First moments and covariance triple of a Gaussian Wigner function."""

    mean_q: float
    mean_p: float
    var_q: float
    var_p: float
    cov_qp: float
    hbar: float = 1.0

    def __post_init__(self):
        det = self.var_q * self.var_p - self.cov_qp**2
        if det < (self.hbar / 2.0) ** 2 - 1e-12:
            # pure damping under the verbatim equation can squeeze below the
            # bound transiently, so this is a diagnostic rather than an error
            warnings.warn(
                f"covariance below the uncertainty bound: det={det:.6e} "
                f"< (hbar/2)^2={(self.hbar/2)**2:.6e}")

    def vector(self) -> np.ndarray:
        return np.array([self.mean_q, self.mean_p, self.var_q, self.var_p,
                         self.cov_qp])


@dataclass
class WignerGrid:
    """Uniform phase-space grid; x and p axes both contain 0 exactly."""

    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    np_: int
    values: np.ndarray

    @classmethod
    def empty(cls, extent_x: float, extent_p: float, nx: int, np_: int):
        return cls(-extent_x, extent_x, -extent_p, extent_p, nx, np_,
                   np.zeros((nx, np_)))

    @property
    def x(self) -> np.ndarray:
        return self.x_min + (self.x_max - self.x_min) * np.arange(self.nx) / self.nx

    @property
    def p(self) -> np.ndarray:
        return self.p_min + (self.p_max - self.p_min) * np.arange(self.np_) / self.np_

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / self.np_

    def norm(self) -> float:
        return float(self.values.sum() * self.dx * self.dp)

    def origin_value(self) -> float:
        return float(self.values[self.nx // 2, self.np_ // 2])

    def moments(self) -> GaussianState:
        w = self.values
        m = w.sum() * self.dx * self.dp
        X = self.x[:, None]
        P = self.p[None, :]
        mq = float((X * w).sum() * self.dx * self.dp / m)
        mp = float((P * w).sum() * self.dx * self.dp / m)
        vq = float(((X - mq) ** 2 * w).sum() * self.dx * self.dp / m)
        vp = float(((P - mp) ** 2 * w).sum() * self.dx * self.dp / m)
        cv = float(((X - mq) * (P - mp) * w).sum() * self.dx * self.dp / m)
        return GaussianState(mq, mp, vq, vp, cv)

    def edge_magnitude(self) -> float:
        """Largest |W| on the outer two-cell frame (boundary-leakage monitor)."""
        v = np.abs(self.values)
        return float(max(v[:2].max(), v[-2:].max(), v[:, :2].max(), v[:, -2:].max()))

    def copy(self) -> "WignerGrid":
        return WignerGrid(self.x_min, self.x_max, self.p_min, self.p_max,
                          self.nx, self.np_, self.values.copy())

    def to_csv(self, path) -> None:
        X, P = np.meshgrid(self.x, self.p, indexing="ij")
        write_csv(path, ["x", "p", "w"],
                  [X.ravel(), P.ravel(), self.values.ravel()])


@dataclass(frozen=True)
class GridParams:
    """Grid sizing; extents default to the cat-adapted rule when None."""

    nx: int = 256
    np_: int = 256
    extent_x: float | None = None
    extent_p: float | None = None


def _default_extent(spec: CatStateSpec, cfg: PhysicalConfig) -> float:
    dq0, dp0 = ground_state_widths(cfg)
    return abs(spec.alpha) * np.sqrt(2.0) * dp0 * 1.5 + 6.0 * dp0


def cat_wigner(spec: CatStateSpec, grid_params: GridParams,
               cfg: PhysicalConfig) -> WignerGrid:
    """Wigner function of the even cat or of its incoherent mixture.

    Even cat: two Gaussian peaks at p = +-P0 plus the origin-centered fringe
    cos(2 P0 q / hbar); exact normalization including the component overlap
    exp(-2|alpha|^2).  Mixture: the two peaks only.
    """
    if spec.parity == "odd":
        raise ValueError("grid builder supports parity 'even' or 'mixture' only")
    hbar = cfg.hbar
    dq0, dp0 = ground_state_widths(cfg)
    P0 = spec.momentum(cfg)
    ext = _default_extent(spec, cfg)
    Lx = grid_params.extent_x if grid_params.extent_x is not None else ext
    Lp = grid_params.extent_p if grid_params.extent_p is not None else ext
    nx, np_ = grid_params.nx, grid_params.np_

    if Lp < P0 + 6.0 * dp0 or Lx < 6.0 * dq0:
        raise ValueError("grid extent under 6 standard deviations beyond the "
                         f"farthest packet: need Lp >= {P0 + 6*dp0:.3g}, Lx >= {6*dq0:.3g}")
    if P0 > 0 and spec.parity == "even":
        fringe_wavelength = np.pi * hbar / P0
        dx = 2.0 * Lx / nx
        if dx > fringe_wavelength / 8.0:
            need = int(np.ceil(2.0 * Lx / (fringe_wavelength / 8.0)))
            raise ValueError(f"grid too coarse for fringes: need nx >= {need} "
                             f"(have {nx}) for 8 points per fringe wavelength")

    g = WignerGrid.empty(Lx, Lp, nx, np_)
    X = g.x[:, None]
    P = g.p[None, :]
    gp = np.exp(-X**2 / (2 * dq0**2) - (P - P0) ** 2 / (2 * dp0**2)) / (np.pi * hbar)
    gm = np.exp(-X**2 / (2 * dq0**2) - (P + P0) ** 2 / (2 * dp0**2)) / (np.pi * hbar)
    if spec.parity == "mixture":
        g.values = 0.5 * (gp + gm)
        return g
    fringe = (np.exp(-X**2 / (2 * dq0**2) - P**2 / (2 * dp0**2))
              * np.cos(2.0 * P0 * X / hbar) / (np.pi * hbar))
    overlap = np.exp(-2.0 * abs(spec.alpha) ** 2)
    g.values = (gp + gm + 2.0 * fringe) / (2.0 * (1.0 + overlap))
    return g


# ---------------------------------------------------------------------------
# coefficients fed to the solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FPCoefficients:
    """Constant master-equation coefficients (the weak-coupling asymptotes)."""

    gamma: float = 0.0
    d1: float = 0.0
    d2: float = 0.0
    delta_m_over_m: float = 0.0

    def at(self, t: float) -> "FPCoefficients":
        return self


class TraceCoefficients:
    """Linear interpolation of a CoefficientTrace, optionally with the mass shift."""

    def __init__(self, trace, include_mass_shift: bool = False,
                 delta_m1: float = 0.0):
        self._t = trace.times
        self._g = trace.gamma
        self._d1 = trace.d1
        self._d2 = trace.d2
        self._m2 = trace.delta_m2
        self._mass = trace.config.mass
        self._include = include_mass_shift
        self._dm1 = delta_m1

    def at(self, t: float) -> FPCoefficients:
        g = float(np.interp(t, self._t, self._g))
        d1 = float(np.interp(t, self._t, self._d1))
        d2 = float(np.interp(t, self._t, self._d2))
        dm = 0.0
        if self._include:
            dm = (self._dm1 + float(np.interp(t, self._t, self._m2))) / self._mass
        return FPCoefficients(g, d1, d2, dm)


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolverOptions:
    steps_per_period: int = 64
    snapshot_stride: int = 8          # snapshots every N steps
    leakage_threshold: float = 1e-4
    norm_drift_threshold: float = 1e-6  # per unit time
    omega0_override: float | None = None  # test hook (e.g. 0 for pure diffusion)


@dataclass
class FPTrajectory:
    times: np.ndarray
    snapshots: list
    origin_values: np.ndarray
    norms: np.ndarray
    coeffs: object
    leakage_flagged: bool = False
    max_edge_value: float = 0.0


class _ShearCache:
    """FFT phase factors for one (dt, kappa, w0) drift map and the diffusion."""

    def __init__(self, grid: WignerGrid, dt: float, w0: float, kappa: float,
                 mass: float, d1: float, d2: float):
        n, m = grid.nx, grid.np_
        kx = 2.0 * np.pi * np.fft.fftfreq(n, d=grid.dx)
        kp = 2.0 * np.pi * np.fft.fftfreq(m, d=grid.dp)
        Fh = np.array([[0.0, kappa / mass], [-mass * w0**2, 0.0]])
        B = expm(-Fh * dt)          # argument transform of the exact drift flow
        x, p = grid.x, grid.p
        if abs(B[1, 0]) < 1e-300:
            # w0 = 0: the map is a single x-shear
            self.ops = [("x", np.exp(1j * np.outer(kx, (B[0, 1]) * p)))]
        else:
            a = (B[0, 0] - 1.0) / B[1, 0]
            b = B[1, 0]
            c = (B[1, 1] - 1.0) / B[1, 0]
            self.ops = [
                ("x", np.exp(1j * np.outer(kx, a * p))),
                ("p", np.exp(1j * np.outer(b * x, kp))),
                ("x", np.exp(1j * np.outer(kx, c * p))),
            ]
        KX, KP = np.meshgrid(kx, kp, indexing="ij")
        self.diffusion_half = np.exp(0.5 * dt * (-d1 * KX**2 + d2 * KX * KP))
        self.key = (dt, w0, kappa, d1, d2)


def _cfl_check(grid: WignerGrid, dt: float, coeffs: FPCoefficients) -> None:
    """Reject steps outside the explicit-substep stability region."""
    kx_max = np.pi / grid.dx
    xmax = max(abs(grid.x_min), abs(grid.x_max))
    adv = 2.0 * abs(coeffs.gamma) * xmax * kx_max       # damping advection (RK4, imag axis)
    if adv * dt > 2.8:
        raise ValueError(f"CFL violation in the damping substep: dt <= {2.8/adv:.3e} "
                         f"required, got {dt:.3e}")
    kp_max = np.pi / grid.dp
    cross = abs(coeffs.d2) * kx_max * kp_max            # indefinite cross-diffusion growth
    if cross * dt > 2.0:
        raise ValueError(f"CFL violation in the cross-diffusion substep: "
                         f"dt <= {2.0/cross:.3e} required, got {dt:.3e}")


def _damp_rhs(grid: WignerGrid, W: np.ndarray, gamma: float) -> np.ndarray:
    # 2 gamma d/dx (x W) in conservative (flux) form; edge fluxes vanish
    F = grid.x[:, None] * W
    out = np.empty_like(W)
    out[1:-1] = (F[2:] - F[:-2]) / (2.0 * grid.dx)
    out[0] = F[1] / (2.0 * grid.dx)
    out[-1] = -F[-2] / (2.0 * grid.dx)
    return 2.0 * gamma * out


def _damp_step(grid: WignerGrid, W: np.ndarray, gamma: float, dt: float) -> np.ndarray:
    if gamma == 0.0:
        return W
    k1 = _damp_rhs(grid, W, gamma)
    k2 = _damp_rhs(grid, W + 0.5 * dt * k1, gamma)
    k3 = _damp_rhs(grid, W + 0.5 * dt * k2, gamma)
    k4 = _damp_rhs(grid, W + dt * k3, gamma)
    return W + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _apply_shears(W: np.ndarray, ops) -> np.ndarray:
    for axis_name, phase in ops:
        axis = 0 if axis_name == "x" else 1
        F = np.fft.fft(W, axis=axis)
        F *= phase
        W = np.fft.ifft(F, axis=axis).real
    return W


def evolve_fokker_planck(W0: WignerGrid, coeffs, t_final: float,
                         cfg: PhysicalConfig,
                         options: SolverOptions | None = None) -> FPTrajectory:
    """Evolve a Wigner grid to t_final, returning periodic snapshots.

    coeffs: FPCoefficients (constants) or TraceCoefficients.  Normalization
    is conserved to the threshold per unit time; boundary leakage beyond the
    threshold flags the trajectory.
    """
    opts = options or SolverOptions()
    if isinstance(coeffs, FPCoefficients):
        coeffs_fn = coeffs
    else:
        coeffs_fn = coeffs
    w0 = (opts.omega0_override if opts.omega0_override is not None
          else cfg.oscillator_frequency)
    period = 2.0 * np.pi / w0 if w0 > 0 else t_final
    dt = period / opts.steps_per_period if w0 > 0 else t_final / opts.steps_per_period
    nsteps = int(np.ceil(t_final / dt - 1e-12))

    grid = W0.copy()
    c0 = coeffs_fn.at(0.0)
    _cfl_check(grid, dt, c0)

    cache = None
    times = [0.0]
    snaps = [grid.copy()]
    origins = [grid.origin_value()]
    norms = [grid.norm()]
    max_edge = grid.edge_magnitude()

    W = grid.values
    for k in range(nsteps):
        t_mid = (k + 0.5) * dt
        ck = coeffs_fn.at(t_mid)
        kappa = 1.0 - ck.delta_m_over_m
        if cache is None or cache.key != (dt, w0, kappa, ck.d1, ck.d2):
            cache = _ShearCache(grid, dt, w0, kappa, cfg.mass, ck.d1, ck.d2)
        W = np.fft.ifft2(np.fft.fft2(W) * cache.diffusion_half).real
        W = _damp_step(grid, W, ck.gamma, dt / 2.0)
        W = _apply_shears(W, cache.ops)
        W = _damp_step(grid, W, ck.gamma, dt / 2.0)
        W = np.fft.ifft2(np.fft.fft2(W) * cache.diffusion_half).real
        if (k + 1) % opts.snapshot_stride == 0 or k == nsteps - 1:
            grid.values = W
            times.append((k + 1) * dt)
            snaps.append(grid.copy())
            origins.append(grid.origin_value())
            norms.append(grid.norm())
            max_edge = max(max_edge, grid.edge_magnitude())

    grid.values = W
    norms = np.array(norms)
    times = np.array(times)
    drift_rate = np.abs(norms - norms[0]).max() / max(t_final, 1e-300)
    if drift_rate > opts.norm_drift_threshold:
        warnings.warn(f"normalization drift {drift_rate:.2e} per unit time "
                      f"exceeds {opts.norm_drift_threshold:.2e}")
    peak = np.abs(snaps[0].values).max()
    leaked = max_edge > opts.leakage_threshold * peak
    if leaked:
        warnings.warn(f"boundary leakage: edge magnitude {max_edge:.2e} vs "
                      f"threshold {opts.leakage_threshold:.2e} x peak")
    return FPTrajectory(times, snaps, np.array(origins), norms, coeffs_fn,
                        leakage_flagged=leaked, max_edge_value=max_edge)


# ---------------------------------------------------------------------------
# Gaussian sector (exact moment dynamics)
# ---------------------------------------------------------------------------

def _moment_system(cfg: PhysicalConfig, c: FPCoefficients):
    M = cfg.mass
    w0 = cfg.oscillator_frequency
    kappa = 1.0 - c.delta_m_over_m
    A = np.array([
        [-2.0 * c.gamma, kappa / M, 0, 0, 0],
        [-M * w0**2, 0, 0, 0, 0],
        [0, 0, -4.0 * c.gamma, 0, 2.0 * kappa / M],
        [0, 0, 0, 0, -2.0 * M * w0**2],
        [0, 0, -M * w0**2, kappa / M, -2.0 * c.gamma],
    ])
    b = np.array([0, 0, 2.0 * c.d1, 0, -c.d2])
    return A, b


def gaussian_moment_evolution(state: GaussianState, coeffs, t: float,
                              cfg: PhysicalConfig) -> GaussianState:
    """Exact 5-dimensional linear moment flow (matrix exponential for constants)."""
    return gaussian_moment_series(state, coeffs, [t], cfg)[-1]


def _ivp_moments(state: GaussianState, coeffs, times, cfg: PhysicalConfig):
    from scipy.integrate import solve_ivp

    def rhs(t, y):
        A, b = _moment_system(cfg, coeffs.at(t) if hasattr(coeffs, "at")
                              else coeffs)
        return A @ y + b

    tl = [0.0] + list(times) if times[0] != 0.0 else list(times)
    sol = solve_ivp(rhs, (0.0, tl[-1]), state.vector(), t_eval=tl,
                    rtol=1e-11, atol=1e-13, method="DOP853")
    if not sol.success:
        raise RuntimeError(f"moment integration failed: {sol.message}")
    out = sol.y.T
    return out[1:] if times[0] != 0.0 else out


def gaussian_moment_series(state: GaussianState, coeffs, times,
                           cfg: PhysicalConfig) -> list[GaussianState]:
    if isinstance(coeffs, FPCoefficients):
        A, b = _moment_system(cfg, coeffs)
        # A is singular for gamma = 0 (resonant diffusion); fall back to the IVP
        if abs(np.linalg.det(A)) > 1e-300:
            y0 = state.vector()
            out = []
            for t in times:
                E = expm(A * t)
                y = E @ y0 + np.linalg.solve(A, (E - np.eye(5)) @ b)
                out.append(GaussianState(*y, hbar=cfg.hbar))
            return out
    return [GaussianState(*y, hbar=cfg.hbar)
            for y in _ivp_moments(state, coeffs, list(times), cfg)]


# ---------------------------------------------------------------------------
# coherence observable and predictors
# ---------------------------------------------------------------------------

@dataclass
class CoherenceSeries:
    times: np.ndarray
    c: np.ndarray
    fit_rate: float
    fit_residual: float
    flagged: bool

    def to_csv(self, path) -> None:
        n = len(self.times)
        write_csv(path, ["t", "c", "fit_rate", "fit_residual"],
                  [self.times, self.c,
                   np.full(n, self.fit_rate), np.full(n, self.fit_residual)])


def coherence_factor(cat_traj: FPTrajectory, mix_traj: FPTrajectory,
                     spec: CatStateSpec, cfg: PhysicalConfig,
                     t_d_predicted: float | None = None) -> CoherenceSeries:
    """Origin-value coherence c(t) = [W_cat - W_mix](0,0,t) normalized to 1 at t=0.

    The fringe envelope stays centered at the phase-space midpoint under
    rotation, so the observable is rotation invariant.  An exponential is
    fitted over t in [2 pi/w0, min(t_final, 3 t_d_predicted)], skipping the
    first period (coefficient jolt).
    """
    if not np.array_equal(cat_traj.times, mix_traj.times):
        raise ValueError("cat and mixture trajectories must share snapshot times")
    denom = cat_traj.origin_values[0] - mix_traj.origin_values[0]
    t = cat_traj.times
    if denom == 0.0:
        return CoherenceSeries(t, np.zeros_like(t), 0.0, 0.0, False)
    c = (cat_traj.origin_values - mix_traj.origin_values) / denom

    w0 = cfg.oscillator_frequency
    t_hi = t[-1] if t_d_predicted is None else min(t[-1], 3.0 * t_d_predicted)
    win = (t >= 2.0 * np.pi / w0) & (t <= t_hi) & (c > 0)
    if win.sum() < 2:
        return CoherenceSeries(t, c, 0.0, np.inf, True)
    slope, icpt = np.polyfit(t[win], np.log(c[win]), 1)
    fit = np.exp(icpt + slope * t[win])
    amplitude = np.abs(c[win]).max()
    residual = float(np.sqrt(np.mean((c[win] - fit) ** 2)) / amplitude)
    return CoherenceSeries(t, c, float(-slope), residual, residual > 0.10)


def decoherence_time_predictors(cfg: PhysicalConfig, spec: CatStateSpec,
                                gamma: float, d1: float,
                                radius: float | None = None) -> dict:
    """All applicable closed-form decoherence times for the given cat.

    Internal identities: res1 = res2 at T = 0; res1 -> res3 for T >> hbar w0.
    Warns when w0 t_d is not >> 1 (outside the slow-decoherence regime).
    """
    hbar, M = cfg.hbar, cfg.mass
    w0 = cfg.oscillator_frequency
    T = cfg.temperature
    dq0, dp0 = ground_state_widths(cfg)
    P0 = spec.momentum(cfg)
    alpha2 = abs(spec.alpha) ** 2
    dP = 2.0 * P0
    dQ = dP / (M * w0)
    tanh = 1.0 if T == 0.0 else np.tanh(hbar * w0 / (2.0 * T))
    v = P0 / (M * cfg.speed_of_light)

    out = {
        "fringe_formula": hbar**2 / (2.0 * P0**2 * d1),
        "res1": tanh / (4.0 * alpha2 * gamma),
        "res2_momentum": 4.0 * (dp0 / dP) ** 2 / gamma,
        "res2_position": 4.0 * (dq0 / dQ) ** 2 / gamma,
        "res6_vacuum_perfect": (3.0 / v**2) * (2.0 * np.pi / w0),
        "separation_momentum": dP,
        "separation_position": dQ,
    }
    if T > 0.0:
        lam_T = hbar / np.sqrt(2.0 * M * T)
        out["res3_high_T"] = 2.0 * (lam_T / dQ) ** 2 / gamma
        out["thermal_de_broglie"] = lam_T
    if radius is not None:
        x = w0 * radius / cfg.speed_of_light
        out["sphere"] = (324.0 / v**2) / x**6 * (2.0 * np.pi / w0)
    t_d = out["res1"]
    if w0 * t_d < 10.0:
        warnings.warn(f"w0 t_d = {w0 * t_d:.3g} is not >> 1: the slow-decoherence "
                      "relations are outside their validity regime")
    return out


def snapshot_metadata(grid: WignerGrid, t: float, cfg: PhysicalConfig) -> dict:
    return {
        "time": t,
        "x_min": grid.x_min, "x_max": grid.x_max,
        "p_min": grid.p_min, "p_max": grid.p_max,
        "nx": grid.nx, "np": grid.np_,
        "norm": grid.norm(),
        "config": cfg.as_dict(),
    }


def write_snapshot(grid: WignerGrid, t: float, cfg: PhysicalConfig,
                   csv_path, json_path) -> None:
    grid.to_csv(csv_path)
    write_json(json_path, snapshot_metadata(grid, t, cfg))
