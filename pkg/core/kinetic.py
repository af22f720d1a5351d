from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from loguru import logger
from scipy.interpolate import interp1d
from scipy.optimize import brentq

from config import (
    BRACKET_EXPANSIONS, KINETIC_TOL, ROOT_MAXITER, ROOT_RTOL, ROOT_XTOL,
    VALIDATION_POINTS, VALIDATION_UMAX,
)
from core.flux import EntropyPair, chord, degenerate, entropy_dissipation, shock_speed
from errors import ConfigError, KineticError, RootFindError


def _root(fun, a, b, what, scale):
    lo, hi = min(a, b), max(a, b)
    try:
        return float(brentq(fun, lo, hi, xtol=ROOT_XTOL * scale, rtol=ROOT_RTOL, maxiter=ROOT_MAXITER))
    except (ValueError, RuntimeError) as exc:
        raise RootFindError(f"{what}: {exc}", bracket=(lo, hi)) from exc


def _expand(fun, anchor, step, what):
    f0 = fun(anchor)
    for _ in range(BRACKET_EXPANSIONS):
        x = anchor + step
        if fun(x) * f0 <= 0:
            return x
        step *= 2
    raise RootFindError(f"{what}: no sign change found", bracket=(anchor, anchor + step))


def tangent(flux, u):
    """phi_natural(u): the other point whose tangent line passes through (u, f(u))."""
    if degenerate(u):
        return 0.0
    g = lambda phi: float(flux.df(phi) * (u - phi) - flux.f(u) + flux.f(phi))
    far = _expand(g, 0.0, -np.sign(u) * abs(u), f"tangent({u})")
    return _root(g, 0.0, far, f"tangent({u})", abs(u))


def zero_dissipation(pair, u):
    """phi_flat_0(u): the far state of the shock from u that dissipates no entropy."""
    if degenerate(u):
        return 0.0
    nat = tangent(pair.flux, u)
    e = lambda v: entropy_dissipation(pair, u, v)
    far = _expand(e, nat, 0.5 * (nat - u), f"zero_dissipation({u})")
    return _root(e, nat, far, f"zero_dissipation({u})", abs(u))


def companion(flux, kin, u):
    """phi_sharp(u): the state between phi_natural(u) and u reached by a chord
    of the same speed as the nonclassical shock (u, phi_flat(u))."""
    if degenerate(u):
        return 0.0
    flat = kin(u)
    nat = tangent(flux, u)
    if abs(flat - nat) <= KINETIC_TOL * max(1.0, abs(u)):
        return nat
    target = shock_speed(flux, u, flat)
    k = lambda v: chord(flux, u, v) - target
    return _root(k, nat, u, f"companion({u})", abs(u))


def _log_grid(u_range, points):
    mags = np.geomspace(1e-3 * u_range, u_range, max(points // 2, 2))
    return np.concatenate([-mags[::-1], mags])


def estimate_constants(phi, u_range=VALIDATION_UMAX, points=VALIDATION_POINTS):
    """Empirical Lipschitz bound and contraction constant of phi on a log grid."""
    grid = np.concatenate([_log_grid(u_range, points), [0.0]])
    grid.sort()
    values = np.array([phi(u) for u in grid])
    lipschitz = float(np.max(np.abs(np.diff(values) / np.diff(grid))))
    nonzero = grid != 0
    twice = np.array([phi(v) for v in values[nonzero]])
    contraction = float(np.max(np.abs(twice) / np.abs(grid[nonzero])))
    return lipschitz, contraction


@dataclass(frozen=True)
class KineticFunction:
    phi_flat: Callable = field(repr=False)
    lipschitz_bound: float
    contraction_K: float
    description: str
    pair: EntropyPair = field(repr=False)
    u_range: float = VALIDATION_UMAX
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.check:
            validate_kinetic(self)

    @property
    def flux(self):
        return self.pair.flux

    def __call__(self, u):
        return float(self.phi_flat(u))

    def natural(self, u):
        return tangent(self.flux, u)

    def sharp(self, u):
        return companion(self.flux, self, u)


def validate_kinetic(kin, points=VALIDATION_POINTS):
    """Raise KineticError unless kin is monotone, strictly pinched between
    phi_flat_0 and phi_natural, contractive and zero at the origin."""
    if not 0 < kin.contraction_K < 1:
        raise KineticError(f"contraction constant {kin.contraction_K} outside (0, 1)")
    if abs(kin(0.0)) > 1e-14:
        raise KineticError("kinetic function does not vanish at 0", {"value": kin(0.0)})
    grid = np.concatenate([_log_grid(kin.u_range, points), [0.0]])
    grid.sort()
    values = np.array([kin(u) for u in grid])
    rising = np.diff(values) > KINETIC_TOL * (1 + np.abs(grid[1:]))
    if np.any(rising):
        i = int(np.argmax(rising))
        raise KineticError("kinetic function is not monotone decreasing",
                           {"u": float(grid[i]), "u_next": float(grid[i + 1])})
    for u, value in zip(grid, values):
        if u == 0:
            continue
        nat = tangent(kin.flux, u)
        zero = zero_dissipation(kin.pair, u)
        s = np.sign(u)
        diagnostics = {"u": float(u), "value": float(value), "natural": nat, "zero_dissipation": zero}
        if s * (value - zero) <= 1e-9 * abs(u):
            raise KineticError("kinetic function reaches the zero-dissipation curve", diagnostics)
        if s * (value - nat) > KINETIC_TOL * max(1.0, abs(u)):
            raise KineticError("kinetic function crosses the natural curve", diagnostics)
        twice = kin(value)
        if abs(twice) > kin.contraction_K * abs(u) + KINETIC_TOL * max(1.0, abs(u)):
            diagnostics["twice"] = twice
            raise KineticError("kinetic function is not contractive", diagnostics)
    logger.debug(f"kinetic function {kin.description!r} validated on {len(grid)} points")
    return kin


def linear_kinetic(pair, c):
    if not c > 0:
        raise ConfigError(f"linear kinetic slope must be positive, got {c}")
    return KineticFunction(
        phi_flat=lambda u: -c * u,
        lipschitz_bound=c,
        contraction_K=c * c,
        description=f"linear c={c!r}",
        pair=pair,
    )


def classical_kinetic(pair):
    flux = pair.flux
    phi = lambda u: tangent(flux, u)
    lipschitz, contraction = estimate_constants(phi)
    return KineticFunction(
        phi_flat=phi,
        lipschitz_bound=lipschitz,
        contraction_K=contraction,
        description="natural",
        pair=pair,
    )


def tabulated_kinetic(table, pair):
    from core.table import validate_rows

    rows = validate_rows(table.rows, pair)
    u = np.array([r[0] for r in rows])
    v = np.array([r[1] for r in rows])
    flux = pair.flux
    classical_side = 0
    if not np.any(u < 0):
        if flux.odd:
            u, v = np.concatenate([-u[::-1], u]), np.concatenate([-v[::-1], v])
        else:
            classical_side = -1
            logger.warning(f"table for {flux.name!r} has no negative rows; using phi_natural there")
    elif not np.any(u > 0):
        if flux.odd:
            u, v = np.concatenate([u, -u[::-1]]), np.concatenate([v, -v[::-1]])
        else:
            classical_side = 1
            logger.warning(f"table for {flux.name!r} has no positive rows; using phi_natural there")
    x = np.concatenate([u[u < 0], [0.0], u[u > 0]])
    y = np.concatenate([v[u < 0], [0.0], v[u > 0]])
    interp = interp1d(x, y, kind="linear", fill_value="extrapolate", assume_sorted=True)

    def phi(w):
        if classical_side and np.sign(w) == classical_side:
            return tangent(flux, w)
        return float(interp(w))

    u_range = float(np.max(np.abs(x)))
    lipschitz, contraction = estimate_constants(phi, u_range)
    return KineticFunction(
        phi_flat=phi,
        lipschitz_bound=lipschitz,
        contraction_K=contraction,
        description=f"table {table.metadata.get('source', 'file')} ({len(rows)} rows)",
        pair=pair,
        u_range=u_range,
    )


def cubic_dispersive_threshold(u):
    """Classical/nonclassical threshold A(u) = 3|u| / (2 sqrt 2) of the cubic model with p = 0."""
    return 3.0 * abs(u) / (2.0 * np.sqrt(2.0))


def cubic_diffusive_dispersive_kinetic(pair, alpha):
    """Closed-form kinetic function of u_t + (u^3)_x = eps u_xx + alpha eps^2 u_xxx."""
    if pair.flux.name != "cubic" or not pair.quadratic:
        raise ConfigError("the closed-form dispersive kinetic function needs the cubic flux and quadratic entropy")
    if not alpha > 0:
        raise ConfigError(f"alpha must be positive, got {alpha}")
    shift = np.sqrt(2.0) * alpha / 3.0

    def phi(u):
        if abs(u) >= 2.0 * shift:
            return -u + shift * np.sign(u)
        return -0.5 * u

    lipschitz, contraction = estimate_constants(phi)
    return KineticFunction(
        phi_flat=phi,
        lipschitz_bound=lipschitz,
        contraction_K=contraction,
        description=f"cubic diffusive-dispersive alpha={alpha!r}",
        pair=pair,
    )
