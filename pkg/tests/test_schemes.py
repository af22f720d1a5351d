import numpy as np
import pytest

from core.flux import entropy_pair
from errors import ConfigError, IntegrationError
from schemes.fluxes import EXPECTED_ORDERS, ORDER_SLACK, ec_flux, ec_flux_2pt, potential
from schemes.integrate import entropy_drift_ratio, integrate, time_step
from schemes.operators import (
    GridState, SchemeConfig, controlled_dissipation_rhs, entropy_residual, flux_truncation_errors,
    observed_orders, second_difference, third_difference, pad,
)


def _periodic(pair, order, h=0.1, **kw):
    return SchemeConfig(pair=pair, order=order, beta=0.0, h=h, domain=(0.0, 2.0), boundary="periodic", **kw)


def test_two_point_flux_is_consistent(pair):
    u = np.linspace(-2.0, 2.0, 7)
    np.testing.assert_allclose(ec_flux_2pt(pair, u, u), u ** 3, atol=1e-14)
    assert ec_flux_2pt(pair, 0.0, 1.0) == pytest.approx(0.25)


def test_two_point_flux_with_non_quadratic_entropy(cubic):
    pair = entropy_pair(cubic, np.cosh, np.sinh, np.cosh, name="cosh")
    v = np.sinh(np.array([-1.5, 0.2, 0.7]))
    assert pair.to_conserved(np.sinh(0.7)) == pytest.approx(0.7, abs=1e-13)
    np.testing.assert_allclose(ec_flux_2pt(pair, v, v), np.arcsinh(v) ** 3, atol=1e-12)
    v0, v1 = 0.3, 2.1
    jump = (v1 - v0) * ec_flux_2pt(pair, v0, v1)
    assert jump == pytest.approx(potential(pair, v1) - potential(pair, v0), abs=1e-9)


@pytest.mark.parametrize("order", [2, 3, 4])
def test_high_order_fluxes_are_consistent(pair, order):
    u = np.full(3, 0.7)
    assert ec_flux(pair, u, u, u, u, order) == pytest.approx(np.full(3, 0.343))


@pytest.mark.parametrize("order, b_star", [(2, "mean"), (3, "mean"), (3, "central"), (4, "mean")])
def test_entropy_identity_holds_cell_by_cell(pair, order, b_star):
    cells = np.random.default_rng(3).uniform(-1.0, 1.0, 20)
    cfg = _periodic(pair, order, b_star=b_star)
    assert np.max(np.abs(entropy_residual(cfg, GridState(0.0, cells)))) < 1e-13


@pytest.mark.parametrize("order", [2, 3, 4])
def test_observed_order_of_accuracy(pair, order):
    u0 = lambda x: 0.5 + 0.25 * np.sin(2 * np.pi * x)
    du0 = lambda x: 0.5 * np.pi * np.cos(2 * np.pi * x)
    n_list = [40, 80, 160, 320]
    eoc = observed_orders(n_list, flux_truncation_errors(pair, order, n_list, u0, du0))
    assert abs(eoc[-1] - EXPECTED_ORDERS[order]) <= ORDER_SLACK


def test_difference_operators_on_polynomials(pair):
    cfg = SchemeConfig(pair=pair, order=3, h=0.1, domain=(0.0, 2.0))
    x = cfg.x
    up = np.concatenate([x[0] - 0.1 * np.arange(3, 0, -1), x, x[-1] + 0.1 * np.arange(1, 4)]) ** 3
    np.testing.assert_allclose(second_difference(cfg, up), 6 * x, atol=1e-9)
    np.testing.assert_allclose(third_difference(cfg, up), np.full_like(x, 6.0), atol=1e-7)


def test_fixed_boundary_padding(pair):
    cfg = SchemeConfig(pair=pair, h=0.1, domain=(0.0, 1.0), boundary_states=(2.0, -1.0))
    padded = pad(cfg, np.zeros(10))
    assert padded[:3].tolist() == [2.0] * 3
    assert padded[-3:].tolist() == [-1.0] * 3


def test_constant_state_is_steady(pair):
    cfg = SchemeConfig(pair=pair, order=4, alpha=1.0, beta=1.0, h=0.1, domain=(0.0, 1.0))
    rhs = controlled_dissipation_rhs(cfg, GridState(0.0, np.full(10, 0.6)))
    np.testing.assert_allclose(rhs, 0.0, atol=1e-13)


@pytest.mark.parametrize("kw", [
    {"order": 5}, {"b_star": "upwind"}, {"boundary": "outflow"}, {"h": 0.0}, {"cfl": 1.5},
    {"beta": -1.0}, {"h": 0.5},
])
def test_invalid_scheme_configs(pair, kw):
    args = dict(pair=pair, h=0.1, domain=(0.0, 1.0))
    args.update(kw)
    with pytest.raises(ConfigError):
        SchemeConfig(**args)


def test_time_step_respects_all_limits(pair):
    cfg = SchemeConfig(pair=pair, alpha=1.0, beta=2.0, h=0.1, cfl=0.5, domain=(0.0, 1.0))
    assert time_step(cfg, np.array([0.0, 1.0])) == pytest.approx(0.5 * min(0.1 / 3.0, 0.5 * 0.1 / 2.0, 0.6 * 0.1))


def test_periodic_run_conserves_mass_and_entropy(pair):
    cfg = SchemeConfig(pair=pair, order=3, beta=0.0, h=0.01, cfl=0.1, domain=(0.0, 1.0), boundary="periodic")
    cells = 0.3 + 0.05 * np.sin(2 * np.pi * cfg.x)
    state, diag = integrate(cfg, GridState(0.0, cells), 1.0)
    assert state.time == 1.0
    assert diag.mass[-1] == pytest.approx(diag.mass[0], abs=1e-13)
    assert diag.entropy[-1] == pytest.approx(diag.entropy[0], abs=1e-10)


def test_diffusion_dissipates_entropy(pair):
    cfg = SchemeConfig(pair=pair, order=2, beta=1.0, h=0.02, domain=(0.0, 1.0), boundary="periodic")
    cells = np.where(cfg.x < 0.5, 1.0, -0.5)
    _, diag = integrate(cfg, GridState(0.0, cells), 0.1)
    assert diag.entropy[-1] < diag.entropy[0]


def test_blow_up_is_reported(pair):
    cfg = SchemeConfig(pair=pair, order=2, beta=0.0, h=0.1, domain=(0.0, 1.0), boundary="periodic")
    cells = np.random.default_rng(0).uniform(-3.0, 3.0, 10)
    with np.errstate(all="ignore"), pytest.raises(IntegrationError):
        integrate(cfg, GridState(0.0, cells), 1e6, dt=1e3)


def test_wrong_grid_size_is_rejected(pair):
    cfg = SchemeConfig(pair=pair, h=0.1, domain=(0.0, 1.0))
    with pytest.raises(ConfigError):
        integrate(cfg, GridState(0.0, np.zeros(5)), 1.0)


@pytest.mark.parametrize("order, alpha", [(2, 0.0), (3, 0.0), (3, 1.0)])
def test_small_sine_mode_decays_at_diffusive_rate(pair, order, alpha):
    cfg = SchemeConfig(pair=pair, order=order, alpha=alpha, beta=1.0, h=0.01, domain=(0.0, 1.0),
                       boundary="periodic")
    cells = 1e-3 * np.sin(2 * np.pi * cfg.x)
    rhs = controlled_dissipation_rhs(cfg, GridState(0.0, cells))
    rate = -np.dot(rhs, cells) / np.dot(cells, cells)
    assert rate == pytest.approx(cfg.h * (2 * np.pi) ** 2, rel=1e-3)


def test_entropy_drift_shrinks_at_fourth_order_in_time(pair):
    cfg = SchemeConfig(pair=pair, order=2, beta=0.0, h=0.02, domain=(0.0, 1.0), boundary="periodic")
    cells = 0.3 + 0.1 * np.sin(2 * np.pi * cfg.x)
    ratio = entropy_drift_ratio(cfg, cells, 1.0, 4 * time_step(cfg, cells))
    assert abs(np.log2(ratio) - 4.0) <= 0.5
