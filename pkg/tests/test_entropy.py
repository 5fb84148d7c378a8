import numpy as np
import pytest

from casimir_decoherence import (CatStateSpec, FPCoefficients, GaussianState,
                                 GridParams, PhysicalConfig, cat_wigner,
                                 entropy_after_period, entropy_rate,
                                 gaussian_moment_series, linear_entropy,
                                 sieve_minimize)
from casimir_decoherence.entropy import _squeezed_state
from casimir_decoherence.io_utils import read_csv_columns
from casimir_decoherence.phasespace import WignerGrid


def _gaussian_grid(L, n, vq, vp):
    g = WignerGrid.empty(L, L, n, n)
    X, P = g.x[:, None], g.p[None, :]
    g.values = np.exp(-X**2 / (2 * vq) - P**2 / (2 * vp)) \
        / (2 * np.pi * np.sqrt(vq * vp))
    return g


# ---------------------------------------------------------------------------
# linear entropy
# ---------------------------------------------------------------------------

def test_ground_state_is_pure(cfg_unit):
    g = _gaussian_grid(10.0, 256, 0.5, 0.5)
    assert abs(linear_entropy(g, cfg_unit)) < 1e-6


def test_balanced_orthogonal_mixture_half(cfg_unit):
    mix = cat_wigner(CatStateSpec(3.0, parity="mixture"), GridParams(), cfg_unit)
    # overlap of the two packets is e^{-2|alpha|^2}-suppressed
    assert linear_entropy(mix, cfg_unit) == pytest.approx(0.5, abs=1e-6)


def test_gaussian_double_width_entropy(cfg_unit):
    st = GaussianState(0.0, 0.0, 1.0, 1.0, 0.0)
    assert linear_entropy(st, cfg_unit) == pytest.approx(0.5, rel=1e-12)


def test_grid_and_gaussian_paths_agree(cfg_unit):
    vq, vp, cov = 0.7, 0.9, 0.25
    g = WignerGrid.empty(12.0, 12.0, 256, 256)
    X, P = g.x[:, None], g.p[None, :]
    det = vq * vp - cov**2
    inv = np.linalg.inv([[vq, cov], [cov, vp]])
    g.values = np.exp(-(inv[0, 0] * X**2 + 2 * inv[0, 1] * X * P
                        + inv[1, 1] * P**2) / 2) / (2 * np.pi * np.sqrt(det))
    st = GaussianState(0.0, 0.0, vq, vp, cov)
    assert linear_entropy(g, cfg_unit) == pytest.approx(
        linear_entropy(st, cfg_unit), abs=1e-4)


def test_negative_entropy_clamped_and_flagged(cfg_unit):
    g = _gaussian_grid(10.0, 256, 0.5, 0.5)
    g.values = g.values * 1.001  # over-pure by construction
    with pytest.warns(UserWarning, match="negative linear entropy"):
        s = linear_entropy(g, cfg_unit)
    assert s == 0.0


def test_entropy_rejects_unknown_type(cfg_unit):
    with pytest.raises(TypeError):
        linear_entropy(np.zeros((4, 4)), cfg_unit)


# ---------------------------------------------------------------------------
# entropy rate
# ---------------------------------------------------------------------------

def test_rate_coherent_diffusion_only(cfg_unit):
    st = GaussianState(0.0, 0.0, 0.5, 0.5, 0.0)
    d1 = 2.3e-3
    rate = entropy_rate(st, FPCoefficients(d1=d1), 0.0, cfg_unit)
    # 4 D1 dp0^2 / hbar^2 = 2 D1 M w0 / hbar
    assert rate == pytest.approx(2.0 * d1, rel=1e-12)


def test_rate_pure_damping_localizes(cfg_unit):
    st = GaussianState(0.0, 0.0, 0.5, 0.5, 0.0)
    gamma = 1e-3
    rate = entropy_rate(st, FPCoefficients(gamma=gamma), 0.0, cfg_unit)
    assert rate == pytest.approx(-2.0 * gamma, rel=1e-12)


def test_rate_zero_coefficients(cfg_unit):
    st = GaussianState(0.0, 0.0, 0.5, 0.5, 0.0)
    assert entropy_rate(st, FPCoefficients(), 0.0, cfg_unit) == 0.0


def test_rate_warns_outside_purity(cfg_unit):
    st = GaussianState(0.0, 0.0, 0.5, 0.5, 0.0)
    with pytest.warns(UserWarning, match="near-pure"):
        entropy_rate(st, FPCoefficients(d1=1e-3), 0.5, cfg_unit)


def test_rate_matches_gaussian_purity_derivative(cfg_unit):
    # on a pure state the three-term rate equals the exact Gaussian-sector
    # d(1 - purity)/dt = (purity/2) tr(Sigma^-1 dSigma/dt), including the
    # cross term, which pins the sigma_qp = 2 cov convention
    co = FPCoefficients(gamma=1e-3, d1=1.5e-3, d2=4e-4)
    st = _squeezed_state(0.4, 0.7, cfg_unit)   # pure, cov != 0
    S = np.array([[st.var_q, st.cov_qp], [st.cov_qp, st.var_p]])
    sdot_qq = 2 * st.cov_qp - 4 * co.gamma * st.var_q + 2 * co.d1
    sdot_pp = -2 * st.cov_qp
    sdot_qp = st.var_p - st.var_q - 2 * co.gamma * st.cov_qp - co.d2
    Sdot = np.array([[sdot_qq, sdot_qp], [sdot_qp, sdot_pp]])
    purity = 1.0 / (2.0 * np.sqrt(np.linalg.det(S)))
    exact = purity / 2.0 * np.trace(np.linalg.solve(S, Sdot))
    rate = entropy_rate(st, co, 0.0, cfg_unit)
    assert rate == pytest.approx(exact, rel=1e-10)


# ---------------------------------------------------------------------------
# accumulated entropy
# ---------------------------------------------------------------------------

def test_period_entropy_zero_for_coherent(cfg_unit):
    st = GaussianState(0.0, 0.0, 0.5, 0.5, 0.0)
    assert entropy_after_period(st, 1e-3, 20 * 2 * np.pi, cfg_unit) == 0.0


def test_period_entropy_squeezed_value(cfg_unit):
    r = 1.0
    st = GaussianState(0.0, 0.0, 0.5 * np.exp(-2 * r), 0.5 * np.exp(2 * r), 0.0)
    tau = 20 * 2 * np.pi
    d1 = 1e-3
    expected = 2.0 * tau * d1 * 2.7621956910836314   # cosh(2) - 1
    assert entropy_after_period(st, d1, tau, cfg_unit) == pytest.approx(
        expected, rel=1e-12)


def test_period_entropy_symmetric_in_r(cfg_unit):
    tau = 10 * 2 * np.pi
    for r in (0.3, 1.2):
        sp = GaussianState(0.0, 0.0, 0.5 * np.exp(-2 * r), 0.5 * np.exp(2 * r), 0.0)
        sm = GaussianState(0.0, 0.0, 0.5 * np.exp(2 * r), 0.5 * np.exp(-2 * r), 0.0)
        assert entropy_after_period(sp, 1e-3, tau, cfg_unit) == pytest.approx(
            entropy_after_period(sm, 1e-3, tau, cfg_unit), rel=1e-12)


def test_period_entropy_warns_few_periods(cfg_unit):
    st = GaussianState(0.0, 0.0, 0.5, 0.5, 0.0)
    with pytest.warns(UserWarning, match="periods"):
        entropy_after_period(st, 1e-3, 2 * np.pi, cfg_unit)


def test_period_entropy_matches_moment_ode(cfg_unit):
    # weak coupling: formula vs exact moment-flow purity at tau
    gamma = 1e-5
    co = FPCoefficients(gamma=gamma, d1=gamma)
    r = 1.0
    st = GaussianState(0.0, 0.0, 0.5 * np.exp(-2 * r), 0.5 * np.exp(2 * r), 0.0)
    tau = 10 * 2 * np.pi
    final = gaussian_moment_series(st, co, [tau], cfg_unit)[0]
    s_ode = linear_entropy(final, cfg_unit)
    s_formula = entropy_after_period(st, gamma, tau, cfg_unit)
    assert s_ode == pytest.approx(s_formula, rel=0.05)


# ---------------------------------------------------------------------------
# sieve
# ---------------------------------------------------------------------------

def test_sieve_analytic_minimum_is_coherent(cfg_unit):
    co = FPCoefficients(gamma=1e-3, d1=1e-3)
    tau = 20 * 2 * np.pi
    res = sieve_minimize(co, tau, cfg_unit)
    assert abs(res.optimal_r) < 1e-4
    assert abs(res.entropy_at_optimum) < 1e-10
    assert res.optimal_var_q * res.optimal_var_p == pytest.approx(0.25, rel=1e-6)
    assert abs(res.optimal_cov_qp) < 1e-6


def test_sieve_scan_convex_in_r(cfg_unit):
    co = FPCoefficients(d1=1e-3)
    tau = 20 * 2 * np.pi
    st_p = _squeezed_state(1.0, 0.0, cfg_unit)
    st_m = _squeezed_state(-1.0, 0.0, cfg_unit)
    st_0 = _squeezed_state(0.0, 0.0, cfg_unit)
    e_p = entropy_after_period(st_p, co.d1, tau, cfg_unit)
    e_m = entropy_after_period(st_m, co.d1, tau, cfg_unit)
    e_0 = entropy_after_period(st_0, co.d1, tau, cfg_unit)
    assert e_p == pytest.approx(e_m, rel=1e-12)
    assert e_p > e_0


def test_sieve_ode_objective_minimum_near_coherent(cfg_unit):
    co = FPCoefficients(gamma=1e-3, d1=1e-3)
    tau = 20 * 2 * np.pi
    res = sieve_minimize(co, tau, cfg_unit, r_max=1.0, n_scan=9, objective="ode")
    assert abs(res.optimal_r) < 0.05


def test_sieve_rejects_unknown_objective(cfg_unit):
    with pytest.raises(ValueError):
        sieve_minimize(FPCoefficients(), 1.0, cfg_unit, objective="bogus")


def test_sieve_exports(tmp_path, cfg_unit):
    co = FPCoefficients(gamma=1e-3, d1=1e-3)
    res = sieve_minimize(co, 20 * 2 * np.pi, cfg_unit, n_scan=11)
    res.scan_to_csv(tmp_path / "scan.csv")
    res.to_json(tmp_path / "result.json")
    cols = read_csv_columns(tmp_path / "scan.csv")
    assert list(cols) == ["r", "phi", "entropy"]
    assert len(cols["r"]) == 11 * 5
