"""Vacuum and thermal spectral densities of the radiation-pressure reservoir.

The mirror couples to the field momentum; its damping is set by the
anti-symmetric spectral density xi[omega] and its diffusion by the symmetric
one sigma[omega].  At T = 0 xi has the closed form (2/pi) hbar^2 Omega
zeta(omega/Omega); the thermal part is a one-dimensional integral over the
field spectrum.  The two densities are tied together by the
fluctuation-dissipation relation sigma = xi / tanh(hbar omega / 2T).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .config import PhysicalConfig, QuadOptions, ConvergenceError

# below this argument the three closed-form zeta terms are each O(1/u) while
# their sum is O(u); switch to the series to dodge the cancellation
_ZETA_SERIES_CUTOFF = 1e-3


def reflection_amplitude(omega: float, transparency: float) -> complex:
    """Frequency-dependent mirror reflection amplitude -i Omega / (omega + i Omega)."""
    if omega < 0:
        raise ValueError(f"omega must be >= 0, got {omega}")
    if transparency <= 0:
        raise ValueError(f"transparency must be > 0, got {transparency}")
    return -1j * transparency / (omega + 1j * transparency)


def zeta(u: float) -> float:
    """Dimensionless vacuum spectrum shape: ln(1+u^2)/(2u) + arctan(u)/u^2 - 1/u.

    Defined for u > 0; callers wanting negative arguments must apply the odd
    extension zeta(-u) = -zeta(u) themselves.  Small u uses the series
    u/6 - u^3/20 (+ O(u^5)).
    """
    if u <= 0:
        raise ValueError(f"zeta requires u > 0, got {u}; use the odd extension explicitly")
    if u < _ZETA_SERIES_CUTOFF:
        return u / 6.0 - u**3 / 20.0
    return np.log1p(u * u) / (2.0 * u) + np.arctan(u) / (u * u) - 1.0 / u


def zeta_prime(u: float) -> float:
    """Derivative of zeta, used for removable-singularity handling."""
    if u <= 0:
        raise ValueError(f"zeta_prime requires u > 0, got {u}")
    if u < _ZETA_SERIES_CUTOFF:
        return 1.0 / 6.0 - 3.0 * u * u / 20.0
    u2 = u * u
    return (1.0 / (1.0 + u2) - np.log1p(u2) / (2.0 * u2)
            + 1.0 / (u2 * (1.0 + u2)) - 2.0 * np.arctan(u) / u**3 + 1.0 / u2)


def xi_vacuum(omega: float, cfg: PhysicalConfig) -> float:
    """T = 0 anti-symmetric spectral density (2/pi) hbar^2 Omega zeta(omega/Omega).

    Odd in omega; returns 0 at omega = 0.
    """
    if omega == 0.0:
        return 0.0
    sign = 1.0 if omega > 0 else -1.0
    Om = cfg.transparency_frequency
    return sign * (2.0 / np.pi) * cfg.hbar**2 * Om * zeta(abs(omega) / Om)


def thermal_photon_number(omega: float, temperature: float, hbar: float = 1.0) -> float:
    """Bose occupation 1/(exp(hbar omega / T) - 1); 0 at T = 0."""
    if omega <= 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return 0.0
    return 1.0 / np.expm1(hbar * omega / temperature)


def _x_times_n(x: float, temperature: float, hbar: float) -> float:
    """x * n_x, continuous through x = 0 where it tends to T/hbar."""
    if temperature == 0.0:
        return 0.0
    y = hbar * x / temperature
    if y < 1e-12:
        return temperature / hbar * (1.0 - y / 2.0)
    return x / np.expm1(y)


def g_kernel(omega: float, omega_prime: float, temperature: float,
             hbar: float = 1.0) -> float:
    """Thermal kernel |w'-w| (n_{|w'-w|} - eps(w'-w) n_{w'}).

    Finite at omega_prime = omega where it equals T/hbar.
    """
    if omega_prime <= 0:
        raise ValueError(f"omega_prime must be > 0, got {omega_prime}")
    if temperature == 0.0:
        return 0.0
    d = omega_prime - omega
    first = _x_times_n(abs(d), temperature, hbar)
    if d == 0.0:
        return first
    return first - np.sign(d) * abs(d) * thermal_photon_number(
        omega_prime, temperature, hbar)


def xi_thermal_with_error(omega: float, cfg: PhysicalConfig,
                          quad_options: QuadOptions | None = None
                          ) -> tuple[float, float]:
    """xi_thermal plus its quadrature + truncation error estimate."""
    opts = quad_options or QuadOptions()
    if omega <= 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    T = cfg.temperature
    if T == 0.0:
        return 0.0, 0.0
    hbar = cfg.hbar
    Om = cfg.transparency_frequency

    def integrand(wp: float) -> float:
        lor = wp / (wp * wp + Om * Om)
        return lor * (g_kernel(omega, wp, T, hbar) - g_kernel(-omega, wp, T, hbar))

    upper = omega + 40.0 * T / hbar
    pts = sorted({p for p in (omega, Om, T / hbar) if 0.0 < p < upper})
    val, err = quad(integrand, 0.0, upper, points=pts,
                    limit=opts.limit, epsabs=opts.abs_floor, epsrel=opts.tol)
    # integrand decays as exp(-hbar w'/T) past the truncation point
    err += abs(integrand(upper)) * (T / hbar) * 2.0
    prefactor = 2.0 * hbar**2 * Om * Om / (np.pi * omega * omega)
    value = prefactor * val
    error = prefactor * err
    if err > opts.tol * max(abs(val), opts.abs_floor) * 10.0 and err > 1e-13 * abs(val):
        raise ConvergenceError(
            f"xi_thermal(omega={omega}) did not converge: |value|={abs(value):.3e}, "
            f"error estimate={error:.3e}", value, error)
    return value, error


def xi_thermal(omega: float, cfg: PhysicalConfig,
               quad_options: QuadOptions | None = None) -> float:
    """Thermal anti-symmetric spectral density at omega > 0.

    Evaluates (2 hbar^2 Omega^2 / pi omega^2) * int_0^inf dw' w'/(w'^2+Omega^2)
    [G(omega,w') - G(-omega,w')] by adaptive quadrature split at the |w'-omega|
    kink and at the Omega and T/hbar scales, truncated at omega + 40 T/hbar
    with the exponential tail added to the error estimate.
    """
    return xi_thermal_with_error(omega, cfg, quad_options)[0]


def xi_total(omega: float, cfg: PhysicalConfig,
             quad_options: QuadOptions | None = None) -> float:
    """xi[omega] = xi_vacuum + xi_thermal (odd extension for omega < 0)."""
    if omega == 0.0:
        return 0.0
    sign = 1.0 if omega > 0 else -1.0
    w = abs(omega)
    val = xi_vacuum(w, cfg)
    if cfg.temperature > 0.0:
        val += xi_thermal(w, cfg, quad_options)
    return sign * val


def sigma_from_fdt(omega: float, xi_value: float, temperature: float,
                   hbar: float = 1.0) -> float:
    """Symmetric density from the fluctuation-dissipation relation xi/tanh(hbar w/2T)."""
    if omega == 0.0:
        raise ValueError("sigma_from_fdt is undefined at omega = 0")
    if temperature == 0.0:
        return xi_value * np.sign(omega)
    return xi_value / np.tanh(hbar * omega / (2.0 * temperature))


@dataclass
class SpectralTable:
    """Sampled xi[omega], sigma[omega] on a positive, strictly increasing grid."""

    frequencies: np.ndarray
    xi_values: np.ndarray
    sigma_values: np.ndarray
    temperature: float
    tail_exponent: float | None = None
    config: PhysicalConfig | None = field(default=None, repr=False)

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        if f.ndim != 1 or len(f) == 0:
            raise ValueError("frequencies must be a non-empty 1-D array")
        if np.any(f <= 0) or np.any(np.diff(f) <= 0):
            raise ValueError("frequencies must be strictly increasing and > 0")
        self.frequencies = f
        self.xi_values = np.asarray(self.xi_values, dtype=float)
        self.sigma_values = np.asarray(self.sigma_values, dtype=float)


def build_spectral_table(cfg: PhysicalConfig, frequencies: np.ndarray,
                         quad_options: QuadOptions | None = None) -> SpectralTable:
    """Tabulate xi and sigma on the given grid; fits the observed large-omega tail.

    The tail exponent is the slope of log xi vs log omega over the top decade;
    it is recorded as metadata only (no closed form is asserted).
    """
    freqs = np.asarray(frequencies, dtype=float)
    xi = np.array([xi_total(w, cfg, quad_options) for w in freqs])
    sig = np.array([sigma_from_fdt(w, x, cfg.temperature, cfg.hbar)
                    for w, x in zip(freqs, xi)])
    tail = None
    top = freqs >= freqs[-1] / 10.0
    if top.sum() >= 3 and np.all(xi[top] > 0):
        tail = float(np.polyfit(np.log(freqs[top]), np.log(xi[top]), 1)[0])
    return SpectralTable(freqs, xi, sig, cfg.temperature, tail, cfg)


def interpolated_xi(table: SpectralTable):
    """Cubic interpolant of a tabulated xi, for use inside trace integrands."""
    from scipy.interpolate import CubicSpline
    return CubicSpline(table.frequencies, table.xi_values)


def verify_fdt_ordering(table: SpectralTable) -> bool:
    """sigma >= xi for omega > 0, with equality iff T = 0."""
    if table.temperature == 0.0:
        return bool(np.allclose(table.sigma_values, table.xi_values, rtol=0, atol=0))
    return bool(np.all(table.sigma_values >= table.xi_values))


def warn_if_unverified(table: SpectralTable) -> None:
    if not verify_fdt_ordering(table):
        warnings.warn("spectral table violates the sigma >= xi ordering")
