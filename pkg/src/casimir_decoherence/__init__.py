"""Radiation-pressure decoherence simulator.

Spectral densities of the field reservoir, master-equation coefficients,
Wigner-function Fokker-Planck evolution of cat states, pointer-state
selection, photon-pair emission bookkeeping, and thermal/SI predictions.
"""

from .config import PhysicalConfig, QuadOptions, ConvergenceError
from .spectral import (reflection_amplitude, zeta, xi_vacuum, xi_thermal,
                       xi_total, thermal_photon_number, g_kernel,
                       sigma_from_fdt, SpectralTable, build_spectral_table)
from .coefficients import (CoefficientTrace, MassShift, gamma_asymptotic,
                           gamma_closed_form_vacuum, d1_asymptotic,
                           coefficient_trace, d2_asymptotic_pv,
                           mass_shift_static, gamma_sphere)
from .phasespace import (CatStateSpec, GaussianState, WignerGrid, GridParams,
                         FPCoefficients, TraceCoefficients, SolverOptions,
                         cat_wigner, evolve_fokker_planck,
                         gaussian_moment_evolution, gaussian_moment_series,
                         coherence_factor, decoherence_time_predictors,
                         ground_state_widths)
from .entropy import (linear_entropy, entropy_rate, entropy_after_period,
                      sieve_minimize, SieveResult)
from .pairs import (PairRun, pair_density_perfect, pair_probability,
                    vacuum_persistence, radiated_energy, gamma_from_pairs,
                    interference_decay, entangled_state_summary)
from .thermal import (MirrorGeometry, SIReport, reflected_power,
                      doppler_friction, doppler_gamma, gamma_thermal_exact,
                      plate_decoherence_time, thermal_photon_wavelength_si,
                      plate_gamma_si)

__version__ = "0.1.0"
