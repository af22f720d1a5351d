from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from config import CFL_DEFAULT
from core.flux import EntropyPair
from errors import ConfigError, IntegrationError
from schemes.fluxes import B_STAR_MODES, ORDERS, ec_entropy_flux, ec_flux

GHOST = 3
BOUNDARIES = ("periodic", "fixed")


@dataclass(frozen=True)
class SchemeConfig:
    """Semi-discrete scheme  du/dt = -D g* + beta h D2 u + alpha h^2 D3 u."""
    pair: EntropyPair = field(repr=False)
    order: int = 3
    alpha: float = 0.0
    beta: float = 1.0
    h: float = 0.01
    cfl: float = CFL_DEFAULT
    domain: Tuple[float, float] = (-1.0, 1.0)
    boundary: str = "fixed"
    b_star: str = "mean"
    boundary_states: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.order not in ORDERS:
            raise ConfigError(f"scheme order must be one of {ORDERS}, got {self.order}")
        if self.b_star not in B_STAR_MODES:
            raise ConfigError(f"b_star must be one of {B_STAR_MODES}, got {self.b_star!r}")
        if self.boundary not in BOUNDARIES:
            raise ConfigError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if not self.h > 0:
            raise ConfigError(f"mesh size must be positive, got {self.h}")
        if not 0 < self.cfl < 1:
            raise ConfigError(f"cfl must lie in (0, 1), got {self.cfl}")
        if self.beta < 0:
            raise ConfigError(f"diffusion coefficient must be non-negative, got {self.beta}")
        if self.n_cells < 2 * GHOST + 1:
            raise ConfigError(f"domain {self.domain} holds only {self.n_cells} cells of size {self.h}")

    @property
    def flux(self):
        return self.pair.flux

    @property
    def n_cells(self):
        a, b = self.domain
        return int(round((b - a) / self.h))

    @property
    def x(self):
        a, _ = self.domain
        return a + (np.arange(self.n_cells) + 0.5) * self.h


@dataclass(frozen=True)
class GridState:
    time: float
    cells: np.ndarray = field(repr=False)

    def check(self, cfg):
        if self.cells.shape != (cfg.n_cells,):
            raise ConfigError(f"grid state has {self.cells.shape} cells, expected {cfg.n_cells}")
        if not np.all(np.isfinite(self.cells)):
            raise IntegrationError(f"non-finite values at t={self.time}", state=self)
        return self


def pad(cfg, u):
    if cfg.boundary == "periodic":
        return np.pad(u, GHOST, mode="wrap")
    left, right = cfg.boundary_states if cfg.boundary_states is not None else (u[0], u[-1])
    return np.concatenate([np.full(GHOST, left), u, np.full(GHOST, right)])


def second_difference(cfg, up):
    """Centered u_xx on the interior cells of a padded array."""
    m, n, h = GHOST, cfg.n_cells, cfg.h
    c = lambda k: up[m + k:m + k + n]
    if cfg.order == 2:
        return (c(-1) - 2 * c(0) + c(1)) / h ** 2
    return (-c(-2) + 16 * c(-1) - 30 * c(0) + 16 * c(1) - c(2)) / (12 * h ** 2)


def third_difference(cfg, up):
    """Centered u_xxx on the interior cells of a padded array."""
    m, n, h = GHOST, cfg.n_cells, cfg.h
    c = lambda k: up[m + k:m + k + n]
    if cfg.order == 2:
        return (c(2) - 2 * c(1) + 2 * c(-1) - c(-2)) / (2 * h ** 3)
    return (-c(3) + 8 * c(2) - 13 * c(1) + 13 * c(-1) - 8 * c(-2) + c(-3)) / (8 * h ** 3)


def _stencils(cfg, up):
    # interfaces j - 1/2 .. n - 1/2, i.e. left cell k = m - 1 .. m + n - 1 of the padded array
    v = cfg.pair.dU(up)
    k = np.arange(GHOST - 1, GHOST + cfg.n_cells)
    return v[k - 1], v[k], v[k + 1], v[k + 2]


def interface_fluxes(cfg, u):
    up = pad(cfg, u)
    return ec_flux(cfg.pair, *_stencils(cfg, up), order=cfg.order, b_star=cfg.b_star)


def interface_entropy_fluxes(cfg, u):
    up = pad(cfg, u)
    return ec_entropy_flux(cfg.pair, *_stencils(cfg, up), order=cfg.order, b_star=cfg.b_star)


def flux_divergence(cfg, u):
    g = interface_fluxes(cfg, u)
    return (g[1:] - g[:-1]) / cfg.h


def controlled_dissipation_rhs(cfg, state):
    u = np.asarray(state.cells, dtype=float)
    up = pad(cfg, u)
    rhs = -flux_divergence(cfg, u)
    if cfg.beta:
        rhs = rhs + cfg.beta * cfg.h * second_difference(cfg, up)
    if cfg.alpha:
        rhs = rhs + cfg.alpha * cfg.h ** 2 * third_difference(cfg, up)
    return rhs


def entropy_residual(cfg, state):
    """v_j (flux part of du_j/dt) + (G*_{j+1/2} - G*_{j-1/2}) / h; zero up to rounding."""
    u = np.asarray(state.cells, dtype=float)
    v = cfg.pair.dU(u)
    G = interface_entropy_fluxes(cfg, u)
    return -v * flux_divergence(cfg, u) + (G[1:] - G[:-1]) / cfg.h


def flux_truncation_errors(pair, order, n_list, u0, du0, b_star="mean"):
    """Max-norm error of D g* against f(u0)' on periodic grids of [0, 1)."""
    errors = []
    for n in n_list:
        cfg = SchemeConfig(pair=pair, order=order, beta=0.0, h=1.0 / n, domain=(0.0, 1.0),
                           boundary="periodic", b_star=b_star)
        x = cfg.x
        exact = pair.flux.df(u0(x)) * du0(x)
        errors.append(float(np.max(np.abs(flux_divergence(cfg, u0(x)) - exact))))
    return errors


def observed_orders(n_list, errors):
    n, e = np.asarray(n_list, dtype=float), np.asarray(errors, dtype=float)
    return list(np.log(e[:-1] / e[1:]) / np.log(n[1:] / n[:-1]))
