import numpy as np
import pytest

from casimir_decoherence import (MirrorGeometry, PhysicalConfig,
                                 doppler_friction, doppler_gamma,
                                 gamma_asymptotic, gamma_thermal_exact,
                                 plate_decoherence_time, plate_gamma_si,
                                 reflected_power, thermal_photon_wavelength_si)
from casimir_decoherence.constants import C_SI, HBAR_SI, KB_SI
from casimir_decoherence.io_utils import read_csv_columns
from casimir_decoherence.thermal import tabulate_si

PLATE = MirrorGeometry("plate", area=1.0)
LINE = MirrorGeometry("line-mirror-1D")


# ---------------------------------------------------------------------------
# reflected power
# ---------------------------------------------------------------------------

def test_plate_stefan_boltzmann_value():
    assert reflected_power(1.0, 1e6, PLATE) == pytest.approx(
        np.pi**2 / 15.0, rel=1e-12)
    assert np.pi**2 / 15.0 == pytest.approx(0.657974, rel=1e-6)


def test_plate_power_T4_scaling():
    vals = [reflected_power(T, 1e6, PLATE) / T**4 for T in (0.5, 1.0, 2.0, 5.0)]
    assert np.ptp(vals) / vals[0] < 1e-6


def test_line_mirror_perfect_reflection_power():
    # Int x/(e^x - 1) dx = pi^2/6 gives power pi T^2/(6 hbar)
    T = 1.0
    val = reflected_power(T, 1e6, MirrorGeometry("line-mirror-1D", cutoff=1e6))
    assert val == pytest.approx(np.pi * T**2 / 6.0, rel=1e-4)


def test_power_vanishes_at_zero_temperature():
    assert reflected_power(0.0, 1.0, PLATE) == 0.0
    assert reflected_power(0.0, 1.0, LINE) == 0.0


def test_geometry_validation():
    with pytest.raises(ValueError):
        MirrorGeometry("plate")
    with pytest.raises(ValueError):
        MirrorGeometry("sphere", radius=-1.0)
    with pytest.raises(ValueError):
        MirrorGeometry("wedge")


# ---------------------------------------------------------------------------
# Doppler picture
# ---------------------------------------------------------------------------

def test_friction_vanishes_at_rest():
    assert doppler_friction(1.0, 1e6, LINE, 0.0) == 0.0


def test_friction_sign_opposes_motion():
    f = doppler_friction(1.0, 1e6, LINE, 1e-3)
    assert f < 0.0


def test_doppler_gamma_half_of_exact_mid_regime():
    # 1D, hbar w0 << T << hbar Omega: Doppler gives pi T^2/(6 hbar M),
    # exactly half the exact pi T^2/(3 hbar M)
    T, Om = 1e3, 1e6
    g_dop = doppler_gamma(T, Om, LINE, 1.0)
    assert g_dop == pytest.approx(np.pi * T**2 / 6.0, rel=1e-4)
    cfg = PhysicalConfig(transparency_frequency=Om, temperature=T)
    g_exact = gamma_thermal_exact(cfg, "hbar*w0<<T<<hbar*Omega")
    assert g_dop / g_exact == pytest.approx(0.5, rel=0.01)
    # the full spectral route agrees with the closed form
    assert gamma_asymptotic(cfg) == pytest.approx(g_exact, rel=0.01)


def test_plate_gamma_formula():
    T = 2.0
    g = doppler_gamma(T, 1e6, PLATE, 1.0)
    assert g == pytest.approx(np.pi**2 / 15.0 * T**4, rel=1e-12)


def test_gamma_thermal_exact_hot_regime():
    cfg = PhysicalConfig(transparency_frequency=2.0, temperature=200.0)
    assert gamma_thermal_exact(cfg, "T>>hbar*Omega") == pytest.approx(200.0)
    assert gamma_asymptotic(cfg) == pytest.approx(200.0, rel=0.01)


def test_gamma_thermal_exact_guards():
    cfg = PhysicalConfig(transparency_frequency=1e6, temperature=1.0)
    with pytest.warns(UserWarning, match="not >> 1"):
        gamma_thermal_exact(cfg, "T>>hbar*Omega")
    with pytest.raises(ValueError):
        gamma_thermal_exact(cfg, "bogus")


# ---------------------------------------------------------------------------
# SI numbers
# ---------------------------------------------------------------------------

def test_thermal_wavelength_50K():
    lam = thermal_photon_wavelength_si(50.0)
    assert lam == pytest.approx(2.9e-4, rel=0.02)
    # exact identity and SI round trip
    assert lam * KB_SI * 50.0 / (2.0 * np.pi * HBAR_SI * C_SI) == pytest.approx(
        1.0, rel=1e-12)


def test_plate_decoherence_coefficient_50K():
    rep = plate_decoherence_time(50.0, 1e-6)
    assert rep.td_coefficient_s_m2 == pytest.approx(1.0e-24, rel=0.05)
    assert rep.diffraction_valid


def test_room_temperature_speedup():
    r50 = plate_decoherence_time(50.0, 1e-6)
    r300 = plate_decoherence_time(300.0, 1e-6)
    ratio = r50.td_coefficient_s_m2 / r300.td_coefficient_s_m2
    assert ratio == pytest.approx((300.0 / 50.0) ** 5, rel=1e-12)
    assert ratio == pytest.approx(7.8e3, rel=0.01)


def test_restemp_equals_distance_relation_chain():
    # t_d = 2 (lambda_T / dQ)^2 / Gamma with the plate Gamma reproduces the
    # closed form; the mass cancels
    T, A, M = 50.0, 1e-6, 1e-9
    kT = KB_SI * T
    lam_T = HBAR_SI / np.sqrt(2.0 * M * kT)
    gamma = plate_gamma_si(T, A, M)
    dq = 1e-9
    td_chain = 2.0 * (lam_T / dq) ** 2 / gamma
    rep = plate_decoherence_time(T, A, delta_q_m=dq)
    assert rep.td_seconds == pytest.approx(td_chain, rel=1e-6)


def test_nanometer_separation_microsecond_scale():
    rep = plate_decoherence_time(50.0, 1e-6, delta_q_m=1e-9)
    assert 1e-7 < rep.td_seconds < 1e-5


def test_diffraction_flag():
    with pytest.warns(UserWarning, match="diffraction"):
        rep = plate_decoherence_time(50.0, 1e-8)
    assert not rep.diffraction_valid


def test_slow_decoherence_flag():
    rep = plate_decoherence_time(50.0, 1e-6, delta_q_m=1e-9,
                                 omega0_per_s=2.0 * np.pi * 1e3)
    assert rep.slow_decoherence_valid is not None


def test_tabulate_csv(tmp_path):
    tabulate_si([50.0, 100.0, 300.0], 1e-6, 1e-9, tmp_path / "t.csv")
    cols = read_csv_columns(tmp_path / "t.csv")
    assert list(cols) == ["T_kelvin", "lambda_th_m", "gamma_per_s", "td_coeff_s_m2"]
    assert cols["gamma_per_s"][2] / cols["gamma_per_s"][0] == pytest.approx(
        6.0**4, rel=1e-9)


def test_si_report_json(tmp_path):
    rep = plate_decoherence_time(50.0, 1e-6, delta_q_m=1e-9)
    rep.to_json(tmp_path / "rep.json")
    import json
    data = json.loads((tmp_path / "rep.json").read_text())
    assert data["lambda_th_m"] == rep.lambda_th_m
