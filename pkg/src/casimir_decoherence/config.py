"""Run configuration: physical parameters and quadrature controls.

Internal unit system everywhere: hbar = M = omega0 = 1 unless a config
explicitly overrides them.  Temperature is an energy (k_B = 1).  The speed
of light only enters SI conversions in the thermal module.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict


@dataclass(frozen=True)
class PhysicalConfig:
    """Mirror + field parameters.

    mass: mirror mass M
    oscillator_frequency: trap frequency omega0 (rad/time)
    transparency_frequency: mirror reflectivity cutoff Omega (rad/time)
    temperature: field temperature in energy units (k_B = 1); 0 for vacuum
    hbar: action unit, 1 internally
    speed_of_light: only used for SI conversions
    """

    mass: float = 1.0
    oscillator_frequency: float = 1.0
    transparency_frequency: float = 1.0
    temperature: float = 0.0
    hbar: float = 1.0
    speed_of_light: float = 1.0

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError(f"mass must be > 0, got {self.mass}")
        if self.oscillator_frequency <= 0:
            raise ValueError(
                f"oscillator_frequency must be > 0, got {self.oscillator_frequency}")
        if self.transparency_frequency <= 0:
            raise ValueError(
                f"transparency_frequency must be > 0, got {self.transparency_frequency}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")
        if self.speed_of_light <= 0:
            raise ValueError(f"speed_of_light must be > 0, got {self.speed_of_light}")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class QuadOptions:
    """Adaptive-quadrature controls shared by the spectral and coefficient integrals.

    tol: target relative error
    abs_floor: absolute-error floor handed to QUADPACK (guards 0-valued integrals)
    limit: max subinterval count
    maxp1: max Chebyshev moment sets for the oscillatory (Filon-type) rule
    omega_max: optional override of the frequency cutoff for trace integrals
    """

    tol: float = 1e-8
    abs_floor: float = 1e-300
    limit: int = 400
    maxp1: int = 100
    omega_max: float | None = None


class ConvergenceError(RuntimeError):
    """Raised when a quadrature cannot reach the requested tolerance.

    Carries the best value and the achieved error estimate.
    """

    def __init__(self, message: str, value: float, error_estimate: float):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
