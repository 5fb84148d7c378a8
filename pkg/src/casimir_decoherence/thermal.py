"""High-temperature physics: Doppler friction, blackbody reflection, SI numbers.

Thermal photons reflected off the moving mirror are Doppler shifted, which
unbalances the radiation pressure and damps the motion; the reflected power
obeys the Stefan-Boltzmann T^4 law for a large plate.  Combining the plate
damping with the thermal-wavelength distance reference gives the fully
SI-evaluated decoherence time t_d = (15/32 pi^7) lambda_th^5 / (c A dQ^2).

Two distinct thermal lengths appear and are kept separate on purpose:
lambda_th = 2 pi hbar c / (k_B T) (photon wavelength) and
lambda_T = hbar / sqrt(2 M k_B T) (de Broglie reference).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .config import PhysicalConfig, ConvergenceError
from .constants import HBAR_SI, KB_SI, C_SI
from .io_utils import write_csv, write_json


@dataclass(frozen=True)
class MirrorGeometry:
    """kind: 'line-mirror-1D' | 'sphere' (radius) | 'plate' (area)."""

    kind: str
    radius: float | None = None
    area: float | None = None
    cutoff: float | None = None          # transparency frequency override

    def __post_init__(self):
        if self.kind not in ("line-mirror-1D", "sphere", "plate"):
            raise ValueError(f"unknown geometry kind {self.kind!r}")
        if self.kind == "sphere" and (self.radius is None or self.radius <= 0):
            raise ValueError("sphere geometry needs radius > 0")
        if self.kind == "plate" and (self.area is None or self.area <= 0):
            raise ValueError("plate geometry needs area > 0")


def reflected_power(temperature: float, transparency: float,
                    geometry: MirrorGeometry, hbar: float = 1.0,
                    c: float = 1.0) -> float:
    """Blackbody power intercepted and reflected by the mirror.

    1D: (1/pi) Int |R|^2 n_w hbar w dw.  Plate, perfect-reflection regime:
    (hbar A/pi^2 c^2) Int w^3 n_w dw = (pi^2/15) A T^4/(hbar^3 c^2), the
    Stefan-Boltzmann law (A in units of length^2; c = 1 internally).
    """
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return 0.0
    T = temperature

    if geometry.kind == "plate":
        # |R|^2 ~ 1 for the thermal band (T << hbar Omega assumed)
        area = geometry.area
        return (np.pi**2 / 15.0) * area * T**4 / (hbar**3 * c**2)

    if geometry.kind == "line-mirror-1D":
        Om = geometry.cutoff if geometry.cutoff is not None else transparency

        def integrand(w: float) -> float:
            refl = Om * Om / (w * w + Om * Om)
            return refl * hbar * w / np.expm1(hbar * w / T)

        upper = 40.0 * T / hbar
        pts = [p for p in (T / hbar, Om) if p < upper]
        val, err = quad(integrand, 0.0, upper, points=sorted(set(pts)),
                        limit=400, epsabs=1e-300, epsrel=1e-10)
        if err > 1e-6 * abs(val):
            raise ConvergenceError("reflected_power quadrature failed", val, err)
        return val / np.pi

    raise ValueError("reflected_power supports 1D mirrors and plates")


def doppler_friction(temperature: float, transparency: float,
                     geometry: MirrorGeometry, qdot: float,
                     hbar: float = 1.0, c: float = 1.0) -> float:
    """Doppler-picture friction force F = -2 (Delta E/Delta t) qdot (/c^2 in SI)."""
    if abs(qdot) / c > 0.1:
        warnings.warn(f"doppler friction beyond first order in v/c: v/c = {qdot/c:.3g}")
    power = reflected_power(temperature, transparency, geometry, hbar, c)
    return -2.0 * power * qdot / c**2


def doppler_gamma(temperature: float, transparency: float,
                  geometry: MirrorGeometry, mass: float,
                  hbar: float = 1.0, c: float = 1.0) -> float:
    """Amplitude damping rate implied by the Doppler force (F = -2 M Gamma qdot)."""
    return reflected_power(temperature, transparency, geometry, hbar, c) / (mass * c**2)


def gamma_thermal_exact(cfg: PhysicalConfig, regime: str) -> float:
    """Closed-form thermal damping limits.

    'T>>hbar*Omega'        -> Omega T / (2 M)
    'hbar*w0<<T<<hbar*Omega' -> pi T^2 / (3 M hbar)
    Guards warn when the config is outside the requested regime.
    """
    T, hbar, M = cfg.temperature, cfg.hbar, cfg.mass
    Om = cfg.transparency_frequency
    w0 = cfg.oscillator_frequency
    if regime == "T>>hbar*Omega":
        if T < 10.0 * hbar * Om:
            warnings.warn(f"T/(hbar Omega) = {T/(hbar*Om):.3g} is not >> 1")
        return Om * T / (2.0 * M)
    if regime == "hbar*w0<<T<<hbar*Omega":
        if not (T > 10.0 * hbar * w0 and T < 0.1 * hbar * Om):
            warnings.warn(f"T = {T:.3g} outside hbar w0 << T << hbar Omega "
                          f"(hbar w0 = {hbar*w0:.3g}, hbar Omega = {hbar*Om:.3g})")
        return np.pi * T * T / (3.0 * M * hbar)
    raise ValueError(f"unknown regime {regime!r}")


# ---------------------------------------------------------------------------
# SI evaluation
# ---------------------------------------------------------------------------

def thermal_photon_wavelength_si(temperature_kelvin: float) -> float:
    """lambda_th = 2 pi hbar c / (k_B T) in meters."""
    if temperature_kelvin <= 0:
        raise ValueError(f"temperature must be > 0 K, got {temperature_kelvin}")
    return 2.0 * np.pi * HBAR_SI * C_SI / (KB_SI * temperature_kelvin)


def plate_gamma_si(temperature_kelvin: float, area_m2: float,
                   mass_kg: float) -> float:
    """Plate damping (pi^2/15) A (k_B T)^4 / (hbar^3 M c^4) in 1/s."""
    kT = KB_SI * temperature_kelvin
    return (np.pi**2 / 15.0) * area_m2 * kT**4 / (HBAR_SI**3 * mass_kg * C_SI**4)


@dataclass
class SIReport:
    temperature_kelvin: float
    lambda_th_m: float
    gamma_per_s: float | None
    td_coefficient_s_m2: float     # t_d * (Delta Q)^2
    td_seconds: float | None
    delta_q_m: float | None
    diffraction_valid: bool
    slow_decoherence_valid: bool | None

    def to_json(self, path) -> None:
        write_json(path, self.__dict__)


def plate_decoherence_time(temperature_kelvin: float, area_m2: float,
                           delta_q_m: float | None = None,
                           mass_kg: float | None = None,
                           omega0_per_s: float | None = None) -> SIReport:
    """SI decoherence time of a cat over a hot plate:

        t_d = (15 / 32 pi^7) lambda_th^5 / (c A dQ^2)

    Returns the coefficient t_d * dQ^2 (s m^2) plus t_d itself when a packet
    separation dQ is given.  Flags rather than fails outside the diffraction
    (lambda_th << sqrt(A)) and slow-decoherence (w0 t_d >> 1) regimes.
    """
    if area_m2 <= 0:
        raise ValueError(f"area must be > 0, got {area_m2}")
    lam = thermal_photon_wavelength_si(temperature_kelvin)
    coeff = (15.0 / (32.0 * np.pi**7)) * lam**5 / (C_SI * area_m2)
    diffraction_ok = bool(lam < np.sqrt(area_m2))
    if not diffraction_ok:
        warnings.warn(f"lambda_th = {lam:.3g} m is not << sqrt(A) = "
                      f"{np.sqrt(area_m2):.3g} m: diffraction neglected unsafely")
    td = float(coeff / delta_q_m**2) if delta_q_m else None
    gamma = float(plate_gamma_si(temperature_kelvin, area_m2, mass_kg)) \
        if mass_kg else None
    slow_ok = None
    if td is not None and omega0_per_s is not None:
        slow_ok = bool(omega0_per_s * td > 10.0)
    return SIReport(float(temperature_kelvin), float(lam), gamma, float(coeff),
                    td, delta_q_m, diffraction_ok, slow_ok)


def tabulate_si(temperatures_kelvin, area_m2: float, mass_kg: float, path) -> None:
    """CSV table T_kelvin, lambda_th_m, gamma_per_s, td_coeff_s_m2."""
    temps = np.asarray(temperatures_kelvin, dtype=float)
    lam = np.array([thermal_photon_wavelength_si(T) for T in temps])
    gam = np.array([plate_gamma_si(T, area_m2, mass_kg) for T in temps])
    coeff = np.array([plate_decoherence_time(T, area_m2).td_coefficient_s_m2
                      for T in temps])
    write_csv(path, ["T_kelvin", "lambda_th_m", "gamma_per_s", "td_coeff_s_m2"],
              [temps, lam, gam, coeff])
