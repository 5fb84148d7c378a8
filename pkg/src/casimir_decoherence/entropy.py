"""Linear-entropy diagnostics and the predictability-sieve search.

Pointer states are the pure states that gain entropy slowest under the
coupling; for this model they are the coherent states.  The search runs
over pure Gaussian states parameterized by squeezing r and orientation phi.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .config import PhysicalConfig
from .io_utils import write_csv, write_json
from .phasespace import (FPCoefficients, GaussianState, WignerGrid,
                         gaussian_moment_evolution)


def linear_entropy(state, cfg: PhysicalConfig) -> float:
    """s = 1 - tr rho^2.

    Grid path: purity = 2 pi hbar Int W^2 dx dp.  Gaussian path:
    purity = hbar / (2 sqrt(var_q var_p - cov^2)).  Small negative values
    from grid noise are clamped; beyond 1e-6 they are flagged.
    """
    hbar = cfg.hbar
    if isinstance(state, WignerGrid):
        purity = 2.0 * np.pi * hbar * float((state.values**2).sum()) * state.dx * state.dp
    elif isinstance(state, GaussianState):
        det = state.var_q * state.var_p - state.cov_qp**2
        purity = hbar / (2.0 * np.sqrt(det))
    else:
        raise TypeError(f"expected WignerGrid or GaussianState, got {type(state)}")
    s = 1.0 - purity
    if s < -1e-6:
        warnings.warn(f"negative linear entropy {s:.3e} beyond the noise allowance")
    return max(s, 0.0) if s < 0 else s


def entropy_rate(state: GaussianState, coeffs: FPCoefficients, s_now: float,
                 cfg: PhysicalConfig) -> float:
    """ds/dt = 2 Gamma (s-1) + (4 D1/hbar^2) var_p + (2 D2/hbar^2) sigma_qp.

    sigma_qp is the anticommutator covariance <{q,p}> - 2<q><p> = 2 cov_qp.
    Valid near purity; warns when s_now > 0.1.
    """
    if s_now > 0.1:
        warnings.warn(f"entropy rate outside its near-pure validity: s = {s_now:.3g}")
    hbar = cfg.hbar
    sigma_qp = 2.0 * state.cov_qp
    return (2.0 * coeffs.gamma * (s_now - 1.0)
            + 4.0 * coeffs.d1 / hbar**2 * state.var_p
            + 2.0 * coeffs.d2 / hbar**2 * sigma_qp)


def entropy_after_period(initial: GaussianState, d1: float, tau: float,
                         cfg: PhysicalConfig) -> float:
    """Entropy accumulated over tau = n 2pi/w0 oscillations (n >> 1):

        s(tau) = 2 tau (D1/hbar^2) [var_p0 + (M w0)^2 var_q0 - M hbar w0]

    Exactly zero for coherent-state dispersions.
    """
    w0 = cfg.oscillator_frequency
    n = tau * w0 / (2.0 * np.pi)
    if n < 5.0:
        warnings.warn(f"tau covers only {n:.2f} periods; the period-averaged "
                      "formula assumes n >> 1")
    M, hbar = cfg.mass, cfg.hbar
    bracket = initial.var_p + (M * w0) ** 2 * initial.var_q - M * hbar * w0
    return 2.0 * tau * d1 / hbar**2 * bracket


def _squeezed_state(r: float, phi: float, cfg: PhysicalConfig) -> GaussianState:
    """Pure Gaussian with squeezing r rotated by phi (in scaled coordinates)."""
    M, hbar, w0 = cfg.mass, cfg.hbar, cfg.oscillator_frequency
    vq0 = hbar / (2.0 * M * w0)
    vp0 = M * hbar * w0 / 2.0
    c, s = np.cos(phi), np.sin(phi)
    # rotate diag(e^{-2r}, e^{2r}) in the dimensionless frame, then scale back
    e_m, e_p = np.exp(-2.0 * r), np.exp(2.0 * r)
    a = c * c * e_m + s * s * e_p
    b = c * c * e_p + s * s * e_m
    cross = c * s * (e_p - e_m)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return GaussianState(0.0, 0.0, vq0 * a, vp0 * b,
                             np.sqrt(vq0 * vp0) * cross, hbar=hbar)


@dataclass
class SieveResult:
    optimal_var_q: float
    optimal_var_p: float
    optimal_cov_qp: float
    optimal_r: float
    optimal_phi: float
    entropy_at_optimum: float
    scan_r: np.ndarray
    scan_phi: np.ndarray
    scan_entropy: np.ndarray
    converged: bool

    def scan_to_csv(self, path) -> None:
        write_csv(path, ["r", "phi", "entropy"],
                  [self.scan_r, self.scan_phi, self.scan_entropy])

    def to_json(self, path) -> None:
        write_json(path, {
            "optimal_var_q": self.optimal_var_q,
            "optimal_var_p": self.optimal_var_p,
            "optimal_cov_qp": self.optimal_cov_qp,
            "optimal_r": self.optimal_r,
            "optimal_phi": self.optimal_phi,
            "entropy_at_optimum": self.entropy_at_optimum,
            "converged": self.converged,
        })


def sieve_minimize(coeffs: FPCoefficients, tau: float, cfg: PhysicalConfig,
                   r_max: float = 2.0, n_scan: int = 41,
                   objective: str = "analytic") -> SieveResult:
    """Locate the pure Gaussian state of least entropy gain over tau.

    objective 'analytic' scores states with the period-averaged formula;
    'ode' integrates the exact moment flow and evaluates the final purity.
    Both place the minimum at the coherent state (r = 0).
    """
    if objective not in ("analytic", "ode"):
        raise ValueError(f"objective must be 'analytic' or 'ode', got {objective!r}")

    def score(r: float, phi: float) -> float:
        st = _squeezed_state(r, phi, cfg)
        if objective == "analytic":
            return entropy_after_period(st, coeffs.d1, tau, cfg)
        final = gaussian_moment_evolution(st, coeffs, tau, cfg)
        det = final.var_q * final.var_p - final.cov_qp**2
        return 1.0 - cfg.hbar / (2.0 * np.sqrt(det))

    rs = np.linspace(-r_max, r_max, n_scan)
    phis = np.linspace(0.0, np.pi / 2.0, 5)
    scan_r, scan_phi, scan_s = [], [], []
    best = (np.inf, 0.0, 0.0)
    for phi in phis:
        for r in rs:
            s = score(r, phi)
            scan_r.append(r)
            scan_phi.append(phi)
            scan_s.append(s)
            if s < best[0]:
                best = (s, r, phi)

    res = minimize(lambda x: score(x[0], x[1]), x0=[best[1], best[2]],
                   method="Nelder-Mead",
                   options={"xatol": 1e-8, "fatol": 1e-14, "maxiter": 2000})
    r_opt, phi_opt = res.x
    st = _squeezed_state(r_opt, phi_opt, cfg)
    if not res.success:
        warnings.warn(f"sieve optimizer did not converge: {res.message}")
    return SieveResult(st.var_q, st.var_p, st.cov_qp, float(r_opt), float(phi_opt),
                       float(res.fun), np.array(scan_r), np.array(scan_phi),
                       np.array(scan_s), bool(res.success))
