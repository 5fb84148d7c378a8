"""Time-dependent master-equation coefficients and their asymptotic values.

The four coefficients are time integrals of the reservoir correlation
functions against sin/cos(omega0 t') kernels.  Since the correlation
functions only exist as distributions in the time domain (the spectrum
decays like ln omega / omega), everything is evaluated in the frequency
domain: exchanging the t' and omega integrals turns each coefficient into
an absolutely convergent integral of the spectral density against an
analytic time kernel,

    Gamma(t)   = (w0/2 pi M hbar) Int xi[w] F_ss dw
    D1(t)      = (1/2 pi M^2)     Int sigma[w] F_cc dw
    D2(t)      = (w0/2 pi M)      Int sigma[w] F_sc dw
    dM2(t)     = (1/pi hbar)      Int xi[w] F_cs dw

with
    F_ss = sin((w-w0)t)/(2(w-w0)) - sin((w+w0)t)/(2(w+w0))
    F_cc = sin((w-w0)t)/(2(w-w0)) + sin((w+w0)t)/(2(w+w0))
    F_sc = [1-cos((w+w0)t)]/(2(w+w0)) + [1-cos((w0-w)t)]/(2(w0-w))
    F_cs = [1-cos((w+w0)t)]/(2(w+w0)) + [1-cos((w-w0)t)]/(2(w-w0))

(F_sc pairs sin(w0 t') with cos(w t') and so carries the (w0-w) denominator;
F_cs is its mirror for the mass-shift kernel.)  The removable singularity at
w = w0 is peeled off analytically via Si/Ci functions and the remaining
smooth factors are integrated with the QUADPACK Filon-type oscillatory rule,
so arbitrary phases w*t are cheap.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import sici

from .config import PhysicalConfig, QuadOptions, ConvergenceError
from .io_utils import write_csv, write_json
from . import spectral


# ---------------------------------------------------------------------------
# analytic time kernels (direct forms, used for verification and small cases)
# ---------------------------------------------------------------------------

def _sinc_diff(a: float, t: float) -> float:
    """sin(a t)/(2 a) with the removable limit t/2 - a^2 t^3/12 near a = 0."""
    if abs(a * t) < 1e-4:
        return t / 2.0 - a * a * t**3 / 12.0
    return np.sin(a * t) / (2.0 * a)


def _cosm1_diff(a: float, t: float) -> float:
    """[1 - cos(a t)]/(2 a) with the removable limit a t^2/4 near a = 0."""
    if abs(a * t) < 1e-4:
        return a * t * t / 4.0 * (1.0 - (a * t) ** 2 / 12.0)
    return (1.0 - np.cos(a * t)) / (2.0 * a)


def kernel_ss(omega: float, omega0: float, t: float) -> float:
    """Int_0^t sin(w0 t') sin(w t') dt'."""
    return _sinc_diff(omega - omega0, t) - _sinc_diff(omega + omega0, t)


def kernel_cc(omega: float, omega0: float, t: float) -> float:
    """Int_0^t cos(w0 t') cos(w t') dt'."""
    return _sinc_diff(omega - omega0, t) + _sinc_diff(omega + omega0, t)


def kernel_sc(omega: float, omega0: float, t: float) -> float:
    """Int_0^t sin(w0 t') cos(w t') dt' (the D2 kernel)."""
    return _cosm1_diff(omega + omega0, t) + _cosm1_diff(omega0 - omega, t)


def kernel_cs(omega: float, omega0: float, t: float) -> float:
    """Int_0^t cos(w0 t') sin(w t') dt' (the mass-shift kernel)."""
    return _cosm1_diff(omega + omega0, t) + _cosm1_diff(omega - omega0, t)


# ---------------------------------------------------------------------------
# asymptotic coefficients
# ---------------------------------------------------------------------------

def gamma_asymptotic(cfg: PhysicalConfig,
                     quad_options: QuadOptions | None = None) -> float:
    """Long-time damping coefficient w0 xi[w0] / (4 M hbar)."""
    w0 = cfg.oscillator_frequency
    return w0 * spectral.xi_total(w0, cfg, quad_options) / (4.0 * cfg.mass * cfg.hbar)


def gamma_closed_form_vacuum(cfg: PhysicalConfig) -> float:
    """T = 0 closed form hbar Omega w0 zeta(w0/Omega) / (2 pi M)."""
    if cfg.temperature != 0.0:
        raise ValueError("closed form only valid at T = 0")
    w0 = cfg.oscillator_frequency
    Om = cfg.transparency_frequency
    return cfg.hbar * Om * w0 * spectral.zeta(w0 / Om) / (2.0 * np.pi * cfg.mass)


def d1_asymptotic(cfg: PhysicalConfig,
                  quad_options: QuadOptions | None = None) -> float:
    """Long-time position-diffusion coefficient sigma[w0] / (4 M^2).

    Identically (hbar / M w0) Gamma / tanh(hbar w0 / 2T): both values are
    derived from the same xi[w0] sample.
    """
    w0 = cfg.oscillator_frequency
    xi = spectral.xi_total(w0, cfg, quad_options)
    sig = spectral.sigma_from_fdt(w0, xi, cfg.temperature, cfg.hbar)
    return sig / (4.0 * cfg.mass**2)


def gamma_sphere(cfg: PhysicalConfig, radius: float) -> float:
    """Damping of a small perfectly-reflecting sphere: hbar w0^8 R^6 / (1296 pi M c^8).

    Valid for w0 R / c << 1; warns above 0.1.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    w0 = cfg.oscillator_frequency
    c = cfg.speed_of_light
    x = w0 * radius / c
    if x > 0.1:
        warnings.warn(f"gamma_sphere outside its long-wavelength regime: w0 R/c = {x:.3g}")
    return cfg.hbar * w0**8 * radius**6 / (1296.0 * np.pi * cfg.mass * c**8)


@dataclass(frozen=True)
class MassShift:
    """Static, cutoff-dependent mass correction Omega * <phi^2(0)>."""

    delta_m1: float
    phi_squared_input: float
    cutoff_descriptor: str = ""


def mass_shift_static(cfg: PhysicalConfig, phi_squared_input: float,
                      cutoff_descriptor: str = "") -> MassShift:
    if phi_squared_input < 0:
        raise ValueError(f"phi_squared_input must be >= 0, got {phi_squared_input}")
    return MassShift(cfg.transparency_frequency * phi_squared_input,
                     phi_squared_input, cutoff_descriptor)


# ---------------------------------------------------------------------------
# frequency-domain trace machinery
# ---------------------------------------------------------------------------

def _default_omega_max(cfg: PhysicalConfig) -> float:
    w0 = cfg.oscillator_frequency
    Om = cfg.transparency_frequency
    wm = max(100.0 * w0, 100.0 * Om)
    if cfg.temperature > 0:
        wm = max(wm, w0 + 40.0 * cfg.temperature / cfg.hbar)
    return wm


class _SpectrumCache:
    """Callable xi / sigma views of the T = 0 spectrum."""

    def __init__(self, cfg: PhysicalConfig, omega_max: float,
                 opts: QuadOptions):
        self.cfg = cfg
        self.w0 = cfg.oscillator_frequency

    def xi(self, w: float) -> float:
        return spectral.xi_vacuum(w, self.cfg)

    def sigma(self, w: float) -> float:
        return spectral.xi_vacuum(abs(w), self.cfg)


class _ResonantPieces:
    """Si/Ci-regularized building blocks of one spectral function f.

    Splits Int_0^M f(w) K(w, t) dw into a smooth oscillatory part handled by
    the QUADPACK weighted rule and the analytic contribution of f(w0):

      minus(t) = (1/2) Int f(w) sin((w-w0)t)/(w-w0) dw
      plus(t)  = (1/2) Int f(w) sin((w+w0)t)/(w+w0) dw
      cminus(t)= (1/2) Int f(w) [1-cos((w-w0)t)]/(w-w0) dw
      cplus(t) = (1/2) Int f(w) [1-cos((w+w0)t)]/(w+w0) dw
    """

    def __init__(self, f, w0: float, omega_max: float, opts: QuadOptions,
                 breakpoints: tuple[float, ...] = ()):
        self.f = f
        self.w0 = w0
        self.M = omega_max
        self.opts = opts
        self.f0 = f(w0)
        eps = 1e-6 * w0
        self._d0 = (f(w0 + eps) - f(w0 - eps)) / (2.0 * eps)
        self.err = 0.0
        # t-independent plain integrals, cached on first use
        self._h_plain = None
        self._g_plain = None
        self._bp = tuple(b for b in breakpoints if 0.0 < b < omega_max)

    # h(x) = (f(w0+x) - f(w0))/x is smooth through x = 0
    def _h(self, x: float) -> float:
        if abs(x) < 1e-9 * self.w0:
            return self._d0
        return (self.f(self.w0 + x) - self.f0) / x

    def _g(self, y: float) -> float:
        return self.f(y - self.w0) / y

    def _wquad(self, func, a: float, b: float, t: float, weight: str) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            val, err = quad(func, a, b, weight=weight, wvar=t,
                            limit=self.opts.limit, maxp1=self.opts.maxp1,
                            epsabs=self.opts.abs_floor, epsrel=self.opts.tol * 0.1,
                            full_output=0)[:2]
        self.err += err
        return val

    def _plain(self, func, a: float, b: float, shift: float) -> float:
        pts = sorted({p + shift for p in self._bp if a < p + shift < b})
        val, err = quad(func, a, b, points=pts or None,
                        limit=self.opts.limit,
                        epsabs=self.opts.abs_floor, epsrel=self.opts.tol * 0.1)
        self.err += err
        return val

    def minus(self, t: float) -> float:
        si1 = sici((self.M - self.w0) * t)[0]
        si2 = sici(self.w0 * t)[0]
        hv = self._wquad(self._h, -self.w0, self.M - self.w0, t, "sin")
        return 0.5 * (hv + self.f0 * (si1 + si2))

    def plus(self, t: float) -> float:
        gv = self._wquad(self._g, self.w0, self.M + self.w0, t, "sin")
        return 0.5 * gv

    def cminus(self, t: float) -> float:
        # (1/2) Int f (1-cos((w-w0)t))/(w-w0): smooth part plus the log/Ci piece
        if self._h_plain is None:
            self._h_plain = self._plain(self._h, -self.w0, self.M - self.w0, -self.w0)
        hcos = self._wquad(self._h, -self.w0, self.M - self.w0, t, "cos")
        ci1 = sici((self.M - self.w0) * t)[1]
        ci2 = sici(self.w0 * t)[1]
        # Int_{-w0}^{M-w0} (1-cos(xt))/x dx reduces, by oddness on [-w0, w0],
        # to Int_{w0}^{M-w0}, = ln((M-w0)/w0) - Ci((M-w0)t) + Ci(w0 t)
        log_ci = np.log((self.M - self.w0) / self.w0) - ci1 + ci2
        return 0.5 * (self._h_plain - hcos) + 0.5 * self.f0 * log_ci

    def cplus(self, t: float) -> float:
        if self._g_plain is None:
            self._g_plain = self._plain(self._g, self.w0, self.M + self.w0, self.w0)
        gcos = self._wquad(self._g, self.w0, self.M + self.w0, t, "cos")
        return 0.5 * (self._g_plain - gcos)


@dataclass
class CoefficientTrace:
    """Time series of the four coefficients plus asymptotics and error budget."""

    times: np.ndarray
    gamma: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    delta_m2: np.ndarray
    asymptotic_gamma: float
    asymptotic_d1: float
    asymptotic_d2: float | None
    config: PhysicalConfig
    tail_estimate: float = 0.0
    quad_error: float = 0.0
    converged: bool | None = None
    quad_failures: list = field(default_factory=list)

    def to_csv(self, path) -> None:
        write_csv(path, ["t", "gamma", "d1", "d2", "delta_m2"],
                  [self.times, self.gamma, self.d1, self.d2, self.delta_m2])

    def d1_jolt_peak(self) -> float:
        """Largest sampled D1(t); the short-time jolt when the grid covers it."""
        return float(np.nanmax(self.d1)) if len(self.d1) else 0.0

    def sidecar(self) -> dict:
        return {
            "asymptotic_gamma": self.asymptotic_gamma,
            "asymptotic_d1": self.asymptotic_d1,
            "asymptotic_d2": self.asymptotic_d2,
            "d1_jolt_peak": self.d1_jolt_peak(),
            "tail_estimate": self.tail_estimate,
            "quad_error": self.quad_error,
            "converged": self.converged,
            "config": self.config.as_dict(),
        }

    def to_json(self, path) -> None:
        write_json(path, self.sidecar())


def coefficient_trace(cfg: PhysicalConfig, time_grid: np.ndarray,
                      quad_options: QuadOptions | None = None,
                      threads: int = 1) -> CoefficientTrace:
    """Evaluate Gamma(t), D1(t), D2(t), dM2(t) on the given time grid.

    time_grid must start at 0 (all four coefficients vanish there).  Distinct
    time points are independent; with threads > 1 they are evaluated in a
    thread pool with a fixed node layout, so results do not depend on the
    schedule.
    """
    opts = quad_options or QuadOptions()
    times = np.asarray(time_grid, dtype=float)
    if len(times) == 0 or times[0] != 0.0:
        raise ValueError("time_grid must start at 0")
    if np.any(np.diff(times) <= 0):
        raise ValueError("time_grid must be strictly increasing")
    if cfg.temperature > 0.0:
        # xi_T ~ A/omega at small omega, so sigma ~ 1/omega^2: the finite-time
        # D1/D2 integrals are infrared-secular (the field momentum random
        # walks) and only the t -> infinity coefficients are defined; use
        # gamma_asymptotic / d1_asymptotic for T > 0
        raise ValueError("coefficient_trace is defined for T = 0 only; "
                         "thermal coefficients exist only as asymptotic values")

    w0 = cfg.oscillator_frequency
    M_ = cfg.mass
    hbar = cfg.hbar
    wmax = opts.omega_max or _default_omega_max(cfg)
    cache = _SpectrumCache(cfg, wmax, opts)
    bp = (cfg.transparency_frequency,)
    xi_pieces = _ResonantPieces(cache.xi, w0, wmax, opts, bp)
    if cfg.temperature > 0:
        sg_pieces = _ResonantPieces(cache.sigma, w0, wmax, opts, bp)
    else:
        sg_pieces = xi_pieces  # sigma = xi at T = 0 on omega > 0

    pre_g = w0 / (2.0 * np.pi * M_ * hbar)
    pre_d1 = 1.0 / (2.0 * np.pi * M_ * M_)
    pre_d2 = w0 / (2.0 * np.pi * M_)
    pre_m2 = 1.0 / (np.pi * hbar)

    failures = []

    def eval_point(t: float):
        if t == 0.0:
            return (0.0, 0.0, 0.0, 0.0)
        try:
            xm, xp = xi_pieces.minus(t), xi_pieces.plus(t)
            if sg_pieces is xi_pieces:
                sm, sp = xm, xp
            else:
                sm, sp = sg_pieces.minus(t), sg_pieces.plus(t)
            g = pre_g * (xm - xp)
            d1 = pre_d1 * (sm + sp)
            # D2: F_sc = cplus + [1-cos((w0-w)t)]/(2(w0-w)) = cplus - cminus
            d2 = pre_d2 * (sg_pieces.cplus(t) - sg_pieces.cminus(t))
            # dM2: F_cs = cplus + cminus
            m2 = pre_m2 * (xi_pieces.cplus(t) + xi_pieces.cminus(t))
            return (g, d1, d2, m2)
        except Exception as exc:  # record per-point failure, keep going
            failures.append((t, repr(exc)))
            return (np.nan, np.nan, np.nan, np.nan)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(eval_point, times))
    else:
        rows = [eval_point(t) for t in times]
    arr = np.array(rows)

    g_inf = gamma_asymptotic(cfg, opts)
    d1_inf = d1_asymptotic(cfg, opts)
    d2_inf = d2_asymptotic_pv(cfg, opts)

    # analytic ln w / w^2 tail of the truncated spectrum
    Om = cfg.transparency_frequency
    tail = (hbar**2 * Om * Om / np.pi) * (np.log(max(wmax / Om, np.e)) + 1.0) / wmax

    converged = None
    if times[-1] > 20.0 / w0 and Om > w0:
        last = times >= 0.9 * times[-1]
        dev = abs(np.nanmean(arr[last, 0]) / g_inf - 1.0)
        converged = bool(dev < 0.01)
        if not converged:
            warnings.warn(
                f"trace gamma mean over last 10% deviates {dev:.2%} from asymptote")

    return CoefficientTrace(times, arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3],
                            g_inf, d1_inf, d2_inf, cfg,
                            tail_estimate=tail,
                            quad_error=xi_pieces.err + (0.0 if sg_pieces is xi_pieces
                                                        else sg_pieces.err),
                            converged=converged, quad_failures=failures)


def d2_asymptotic_pv(cfg: PhysicalConfig,
                     quad_options: QuadOptions | None = None,
                     sigma_override=None) -> float:
    """Principal-value limit of D2(t): (w0/4 pi M)[Int sigma/(w+w0) + PV Int sigma/(w0-w)].

    The PV around w0 pairs mirrored nodes: Int_0^{2 w0} sigma/(w0-w) dw
    = Int_0^{w0} [sigma(w0-u) - sigma(w0+u)]/u du.  sigma_override replaces
    the config spectrum with an arbitrary callable (testing hook).
    """
    opts = quad_options or QuadOptions()
    w0 = cfg.oscillator_frequency
    wmax = opts.omega_max or _default_omega_max(cfg)
    if sigma_override is not None:
        sig = sigma_override
    elif cfg.temperature > 0.0:
        raise ValueError("d2_asymptotic_pv is defined for T = 0 only: the "
                         "thermal sigma ~ 1/omega^2 makes the PV integral "
                         "infrared divergent")
    else:
        sig = _SpectrumCache(cfg, wmax, opts).sigma

    eps = 1e-7 * w0
    dsig0 = (sig(w0 + eps) - sig(w0 - eps)) / (2.0 * eps)

    def mirrored(u: float) -> float:
        if u < 1e-9 * w0:
            return -2.0 * dsig0
        return (sig(w0 - u) - sig(w0 + u)) / u

    total_err = 0.0
    a, e1 = quad(lambda w: sig(w) / (w + w0), 0.0, wmax,
                 limit=opts.limit, epsabs=opts.abs_floor, epsrel=opts.tol)
    b1, e2 = quad(mirrored, 0.0, w0,
                  limit=opts.limit, epsabs=opts.abs_floor, epsrel=opts.tol)
    b2, e3 = quad(lambda w: sig(w) / (w0 - w), 2.0 * w0, wmax,
                  limit=opts.limit, epsabs=opts.abs_floor, epsrel=opts.tol)
    total_err = e1 + e2 + e3
    val = (w0 / (4.0 * np.pi * cfg.mass)) * (a + b1 + b2)
    scale = max(abs(val), abs(a), abs(b1), abs(b2)) * w0 / (4.0 * np.pi * cfg.mass)
    if total_err > 1e-4 * max(scale, 1e-300):
        raise ConvergenceError(
            f"d2_asymptotic_pv did not converge: value={val:.3e}, "
            f"error={total_err:.3e}", val, total_err)
    return val
