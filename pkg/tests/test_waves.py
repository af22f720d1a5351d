import numpy as np
import pytest

from config import CONNECT_TOL
from core.flux import asym_cubic_flux, entropy_dissipation
from errors import ConfigError, KineticError
from waves.kinetics import (
    classical_threshold, connection, kinetic_table, kinetic_value, slope_at_zero, speed_window,
)
from waves.model import TwModel, equilibria
from waves.shooting import Terminal, closest_approach, energy, shifted, shoot, truncated, tw_dissipation

SHIFT = np.sqrt(2.0) / 3.0


@pytest.mark.parametrize("alpha, p", [(0.0, 0.0), (-1.0, 0.5), (1.0, 1.5), (1.0, -0.1)])
def test_model_parameters_are_checked(cubic, alpha, p):
    with pytest.raises(ConfigError):
        TwModel(cubic, alpha, p)


def test_equilibria_of_cubic(cubic):
    roots = equilibria(TwModel(cubic, 1.0), 2.0, 7.0)
    assert roots == pytest.approx([-3.0, 1.0, 2.0], abs=1e-12)


def test_sampled_equilibria_of_non_polynomial_flux():
    flux = asym_cubic_flux()
    roots = equilibria(TwModel(flux, 1.0), 1.0, 0.9)
    assert len(roots) == 3
    assert roots[-1] == 1.0
    for w in roots:
        assert abs(flux.f(w) - 1.0 - 0.9 * (w - 1.0)) <= 1e-12


def test_equilibria_keep_double_roots(cubic):
    # at the tangent speed the middle and far states of u = 2 merge at -1
    roots = equilibria(TwModel(cubic, 1.0), 2.0, 3.0)
    assert roots == pytest.approx([-1.0, -1.0, 2.0], abs=1e-6)


def test_orbit_near_characteristic_speed_is_captured(cubic):
    traj = shoot(TwModel(cubic, 1.0), 2.0, 11.0)
    assert traj.terminal is Terminal.CAPTURED
    assert traj.middle == pytest.approx(-1.0 + np.sqrt(8.0), abs=1e-12)


def test_shoot_needs_three_equilibria(cubic):
    with pytest.raises(ConfigError):
        shoot(TwModel(cubic, 1.0), 2.0, 2.0)
    with pytest.raises(ConfigError):
        shoot(TwModel(cubic, 1.0), 0.0, 1.0)


def test_nonclassical_value_matches_closed_form(cubic):
    assert kinetic_value(TwModel(cubic, 1.0, 0.0), 2.0) == pytest.approx(-2.0 + SHIFT, abs=1e-6)
    assert kinetic_value(TwModel(cubic, 1.0, 0.0), -2.0) == pytest.approx(2.0 - SHIFT, abs=1e-6)


def test_classical_branch_returns_tangent(cubic):
    assert kinetic_value(TwModel(cubic, 1.0, 0.0), 0.5) == pytest.approx(-0.25, abs=1e-14)
    lam, traj = connection(TwModel(cubic, 1.0, 0.0), 0.5)
    assert traj is None
    assert lam == pytest.approx(0.25 - 0.125 + 0.0625)


def test_connection_dissipates_like_the_shock(cubic, pair):
    model = TwModel(cubic, 1.0, 0.0)
    lam, traj = connection(model, 2.0)
    assert traj.terminal is Terminal.CONVERGED
    assert lam == pytest.approx(4.0 + 2.0 * traj.far + traj.far ** 2, rel=1e-9)
    exact = entropy_dissipation(pair, 2.0, traj.far)
    assert tw_dissipation(traj, model, pair) == pytest.approx(exact, rel=1e-6)


def test_energy_decreases_along_orbit(cubic):
    model = TwModel(cubic, 0.5, 0.5)
    _, traj = connection(model, 1.5)
    e = energy(traj, model)
    assert np.all(np.diff(e) <= 1e-9)


def test_dissipation_needs_a_connection(cubic, pair):
    model = TwModel(cubic, 1.0)
    traj = shoot(model, 2.0, 11.0)
    with pytest.raises(KineticError):
        tw_dissipation(traj, model, pair)


def test_shifted_orbit_is_the_same_curve(cubic):
    model = TwModel(cubic, 1.0)
    _, traj = connection(model, 2.0)
    moved = shifted(traj, 3.0)
    y = traj.y[len(traj.y) // 2]
    np.testing.assert_allclose(moved.at(y + 3.0), traj.at(y))


def test_slope_at_zero_of_linear_rows():
    assert slope_at_zero([1.0, 2.0, 3.0, 4.0], [-0.6, -1.2, -1.8, -2.4]) == pytest.approx(-0.6)


@pytest.mark.slow
def test_kinetic_table_for_pure_dispersion(cubic):
    table = kinetic_table(TwModel(cubic, 1.0, 0.0), [1.5, 2.0, 2.5])
    np.testing.assert_allclose(table.u_plus(), -table.u_minus() + SHIFT, atol=1e-6)
    assert table.metadata["source"] == "traveling-wave"


@pytest.mark.slow
def test_small_amplitude_slopes(cubic):
    small = [0.01, 0.02, 0.04]
    assert kinetic_table(TwModel(cubic, 5.0, 0.4), small).slope_at_zero == pytest.approx(-0.5, abs=0.05)
    assert kinetic_table(TwModel(cubic, 1.0, 1.0), small).slope_at_zero == pytest.approx(-1.0, abs=0.05)


@pytest.mark.slow
def test_classical_threshold_of_pure_dispersion(cubic):
    assert classical_threshold(cubic, 0.0, 2.0) == pytest.approx(3.0 / np.sqrt(2.0), rel=1e-2)


def test_classical_threshold_needs_small_exponent(cubic):
    with pytest.raises(ConfigError):
        classical_threshold(cubic, 0.5, 2.0)


def test_connection_ends_at_the_far_saddle(cubic):
    lam, traj = connection(TwModel(cubic, 1.0, 0.5), 1.2)
    assert traj.terminal is Terminal.CONVERGED
    _, distance = closest_approach(traj)
    assert distance <= CONNECT_TOL
    assert lam == pytest.approx(1.44 + 1.2 * traj.far + traj.far ** 2, rel=1e-9)


def test_captured_orbit_stays_away_from_the_far_saddle(cubic):
    traj = shoot(TwModel(cubic, 1.0), 2.0, 11.0)
    y, distance = closest_approach(traj)
    assert distance > CONNECT_TOL
    cut = truncated(traj, y)
    assert cut.terminal is Terminal.CONVERGED
    assert cut.y[-1] == y
    np.testing.assert_allclose(cut.end_state, traj.at(y))


@pytest.mark.slow
def test_speed_scan_has_a_single_transition(cubic):
    model = TwModel(cubic, 1.0, 0.0)
    lam_t, lam_c = speed_window(model, 2.0)
    terminals = [shoot(model, 2.0, lam).terminal for lam in np.linspace(lam_t, lam_c, 66)[1:-1]]
    escaped = np.array([t is Terminal.ESCAPED for t in terminals], dtype=int)
    assert escaped[0] == 1 and escaped[-1] == 0
    assert np.all(np.diff(escaped) <= 0)


@pytest.mark.slow
def test_kinetic_value_grows_with_diffusion(cubic):
    values = [kinetic_value(TwModel(cubic, alpha, 0.5), 1.0) for alpha in (0.2, 1.0, 5.0)]
    assert np.all(np.diff(values) > 0)
    assert all(-1.0 < v <= -0.5 + 1e-9 for v in values)


@pytest.mark.slow
def test_classical_threshold_is_linear_without_exponent(cubic):
    thresholds = [classical_threshold(cubic, 0.0, u) for u in (0.25, 0.5, 1.0, 2.0)]
    assert np.all(np.diff(thresholds) > 0)
    np.testing.assert_allclose(np.array(thresholds) / [0.25, 0.5, 1.0, 2.0], 1.5 / np.sqrt(2.0), rtol=1e-2)


@pytest.mark.slow
def test_classical_threshold_ratio_grows_at_small_amplitude(cubic):
    grid = (0.8, 0.4, 0.2, 0.1)
    ratios = [classical_threshold(cubic, 0.2, u) / u for u in grid]
    assert np.all(np.diff(ratios) > 0)
