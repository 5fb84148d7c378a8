import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from casimir_decoherence import (CatStateSpec, PairRun, PhysicalConfig,
                                 decoherence_time_predictors,
                                 entangled_state_summary, gamma_from_pairs,
                                 interference_decay, pair_density_perfect,
                                 pair_probability, radiated_energy,
                                 vacuum_persistence)
from casimir_decoherence.io_utils import read_csv_columns

GAMMA_PERFECT = 1.0 / (12.0 * np.pi)


# ---------------------------------------------------------------------------
# pair density
# ---------------------------------------------------------------------------

def test_density_vanishes_on_single_photon_edge():
    assert pair_density_perfect(0.0, 1.0) == 0.0
    assert pair_density_perfect(1.0, 0.0) == 0.0


@given(a=st.floats(1e-3, 10.0), b=st.floats(1e-3, 10.0))
@settings(max_examples=60)
def test_density_symmetric_and_nonnegative(a, b):
    assert pair_density_perfect(a, b) == pair_density_perfect(b, a)
    assert pair_density_perfect(a, b) >= 0.0


@pytest.mark.parametrize("w", [0.1, 0.5, 1.0, 2.0])
def test_density_sum_rule(w):
    # pi * Int_0^w P(w1, w - w1) dw1 must equal the linear spectral limit
    # hbar^2 w / (3 pi); quadrature oracle at 1e-8
    val, _ = quad(lambda w1: pair_density_perfect(w1, w - w1), 0.0, w,
                  limit=200, epsrel=1e-12)
    assert np.pi * val == pytest.approx(w / (3.0 * np.pi), rel=1e-8)


# ---------------------------------------------------------------------------
# pair probability
# ---------------------------------------------------------------------------

def test_probability_zero_without_motion():
    assert pair_probability(0.4, 0.6, 100.0, 0.0, 1.0) == 0.0


def test_probability_resonance_limit():
    dt, qd = 300.0, 1e-3
    dens = pair_density_perfect(0.4, 0.6)
    assert pair_probability(0.4, 0.6, dt, qd, 1.0) == pytest.approx(
        dens * qd**2 * dt**2 / 4.0, rel=1e-10)


def test_probability_main_lobe_carries_most_weight():
    # weighted sinc^2 mass within |w1+w2-w0| < 2 pi/dt vs the full line;
    # the bare sinc^2 main lobe holds 0.9028 of the total
    dt = 200.0
    line = lambda s: s / (3.0 * np.pi**2)      # Int P(w1, s-w1) dw1
    def strip(numax):
        f = lambda nu: np.sin(nu * dt / 2.0) ** 2 / nu**2 * line(1.0 + nu) \
            * (1.0 + nu)
        val, _ = quad(f, -numax, numax, limit=400,
                      points=[0.0], epsrel=1e-10)
        return val
    main = strip(2.0 * np.pi / dt)
    total = strip(0.999)
    assert main / total > 0.90


# ---------------------------------------------------------------------------
# persistence, energy, damping
# ---------------------------------------------------------------------------

def _run(w0dt, qdot0=1e-3):
    return PairRun(1.0, qdot0, w0dt)


def test_persistence_unity_at_zero_interval():
    assert vacuum_persistence(PairRun(1.0, 1e-3, 0.0)) == 1.0


def test_persistence_energy_conservation_identity():
    # 1 - |B|^2 = Gamma M qdot0^2 dt / (hbar w0) in the delta-line regime
    for w0dt in (200.0, 400.0):
        run = _run(w0dt)
        lost = 1.0 - vacuum_persistence(run)
        expected = GAMMA_PERFECT * run.qdot0**2 * run.dt
        assert lost == pytest.approx(expected, rel=0.02)


def test_persistence_linear_in_interval():
    lost1 = 1.0 - vacuum_persistence(_run(200.0))
    lost2 = 1.0 - vacuum_persistence(_run(400.0))
    assert lost2 / lost1 == pytest.approx(2.0, rel=0.02)


def test_persistence_regime_violation_raises():
    with pytest.raises(ValueError, match="regime"):
        vacuum_persistence(PairRun(1.0, 10.0, 400.0))


def test_radiated_energy_zero_without_motion():
    run = PairRun(1.0, 0.0, 400.0)
    assert radiated_energy(run) == 0.0


def test_radiated_power_constant_in_interval():
    p1 = radiated_energy(_run(200.0)) / 200.0
    p2 = radiated_energy(_run(400.0)) / 400.0
    assert p1 == pytest.approx(p2, rel=0.02)


def test_radiated_energy_recovers_perfect_damping():
    run = _run(400.0)
    assert radiated_energy(run) / (run.dt * run.qdot0**2) == pytest.approx(
        GAMMA_PERFECT, rel=0.02)


def test_gamma_recovery_and_error_decreasing():
    errs = []
    for w0dt in (200.0, 400.0, 800.0):
        g = gamma_from_pairs(_run(w0dt))
        assert g == pytest.approx(GAMMA_PERFECT, rel=0.02)
        errs.append(abs(g / GAMMA_PERFECT - 1.0))
    assert errs[2] < errs[0]


def test_gamma_recovery_independent_of_velocity():
    g1 = gamma_from_pairs(_run(400.0, qdot0=1e-3))
    g2 = gamma_from_pairs(_run(400.0, qdot0=5e-4))
    assert g2 == pytest.approx(g1, rel=1e-3)


def test_gamma_delta_line_integral_oracle():
    # (pi/4)(w0/M hbar) Int P(w1, w0-w1) dw1 is the exact delta-line form
    val, _ = quad(lambda w1: pair_density_perfect(w1, 1.0 - w1), 0.0, 1.0,
                  limit=200, epsrel=1e-12)
    line_gamma = (np.pi / 4.0) * val
    assert line_gamma == pytest.approx(GAMMA_PERFECT, rel=1e-10)
    assert gamma_from_pairs(_run(400.0)) == pytest.approx(line_gamma, rel=0.02)


def test_gamma_recovery_rejects_degenerate_run():
    with pytest.raises(ValueError):
        gamma_from_pairs(PairRun(1.0, 0.0, 400.0))


# ---------------------------------------------------------------------------
# interference decay and entanglement bookkeeping
# ---------------------------------------------------------------------------

def test_decay_zero_without_motion():
    assert interference_decay(PairRun(1.0, 0.0, 400.0)) == 0.0


def test_decay_times_vacuum_decoherence_time_is_unity():
    # the appendix route and the phase-space-distance route agree
    run = _run(400.0)
    rate = interference_decay(run)
    td = (3.0 / run.qdot0**2) * 2.0 * np.pi
    assert rate * td == pytest.approx(1.0, rel=0.05)


def test_decay_matches_distance_relation():
    run = _run(400.0)
    cfg = PhysicalConfig()
    alpha = run.qdot0 * np.sqrt(1.0 / 2.0)  # i qdot0 sqrt(M / 2 hbar w0)
    with pytest.warns(UserWarning):
        spec = CatStateSpec(alpha)
    p = decoherence_time_predictors(cfg, spec, GAMMA_PERFECT, GAMMA_PERFECT)
    assert interference_decay(run) * p["res2_momentum"] == pytest.approx(
        1.0, rel=0.05)


def test_decay_quadratic_in_velocity():
    r1 = interference_decay(_run(400.0, qdot0=1e-3))
    r2 = interference_decay(_run(400.0, qdot0=2e-3))
    assert r2 / r1 == pytest.approx(4.0, rel=1e-10)


def test_entangled_summary_trivial_interval():
    s = entangled_state_summary(PairRun(1.0, 1e-3, 0.0), 3.0j)
    assert s["even_branch_weight"] == 1.0
    assert s["odd_branch_weight"] == 0.0


def test_entangled_summary_bookkeeping():
    run = _run(400.0)
    s = entangled_state_summary(run, 3.0j)
    assert s["weight_sum"] == pytest.approx(1.0, rel=1e-14)
    assert s["even_branch_weight"] == pytest.approx(vacuum_persistence(run))
    # odd-branch weight is half the pair weight; the decay rate carries both
    # the vacuum-loss and the parity-flip contributions
    assert s["odd_branch_weight"] == pytest.approx(
        0.5 * s["interference_decay_rate"] * run.dt, rel=1e-12)
    assert s["coherence_multiplier"] == pytest.approx(
        1.0 - s["interference_decay_rate"] * run.dt, rel=1e-12)


def test_pair_spectrum_export(tmp_path):
    run = _run(250.0)
    run.export_csv(tmp_path / "pairs.csv")
    cols = read_csv_columns(tmp_path / "pairs.csv")
    assert list(cols) == ["omega1", "omega2", "prob_density"]
    assert np.all(cols["prob_density"] >= 0.0)
