import numpy as np
from loguru import logger

from config import (
    ALPHA_RANGE, ALPHA_RTOL, CONNECT_TOL, DEGENERACY_THRESHOLD, LAMBDA_EDGE, LAMBDA_MAXITER, LAMBDA_WIDTH,
    MIN_TABLE_ROWS,
)
from core.flux import quadratic_entropy, shock_speed
from core.kinetic import tangent, zero_dissipation
from core.table import KineticTable, validate_rows
from errors import ConfigError, KineticError
from processing.pipeline import run_sweep
from waves.model import TwModel
from waves.shooting import Terminal, closest_approach, shoot, truncated

HI_EDGE = 1e-3


def speed_window(model, u):
    """(lam_tangent, f'(u)): the speeds that leave three equilibria."""
    nat = tangent(model.flux, u)
    return shock_speed(model.flux, u, nat), float(model.flux.df(u))


def is_classical(model, u):
    """True when no nonclassical connection leaves u: the orbit just above the
    tangent speed is already captured by the middle equilibrium."""
    lam_t, lam_c = speed_window(model, u)
    traj = shoot(model, u, lam_t + LAMBDA_EDGE * (lam_c - lam_t))
    return traj.terminal in (Terminal.CAPTURED, Terminal.BUDGET)


def _settle(u, candidates):
    """The bracket orbit that passes closest to the far saddle, cut there."""
    best, best_y, best_d = None, None, np.inf
    for traj in candidates:
        y, d = closest_approach(traj)
        if d < best_d:
            best, best_y, best_d = traj, y, d
    if best_d > CONNECT_TOL:
        raise KineticError(f"no orbit from {u} reaches the far saddle (closest {best_d:.3e})",
                           {"u_minus": u, "lam": best.lam, "distance": best_d})
    logger.debug(f"connection from {u!r} at speed {best.lam!r} cut at distance {best_d:.3e}")
    return best.lam, truncated(best, best_y)


def connection(model, u):
    """Bisect on the speed for the saddle-saddle orbit leaving u.

    Returns (lam, trajectory); trajectory is None for the classical branch.
    """
    lam_t, lam_c = speed_window(model, u)
    width = lam_c - lam_t
    lo, hi = lam_t + LAMBDA_EDGE * width, lam_c - HI_EDGE * width
    below = shoot(model, u, lo)
    if below.terminal is Terminal.CONVERGED:
        return lo, below
    if below.terminal in (Terminal.CAPTURED, Terminal.BUDGET):
        return lam_t, None
    above = shoot(model, u, hi)
    if above.terminal is Terminal.CONVERGED:
        return hi, above
    if above.terminal is Terminal.ESCAPED:
        raise KineticError(f"no speed in the window captures the orbit from {u}",
                           {"u_minus": u, "bracket": (lo, hi)})
    for _ in range(LAMBDA_MAXITER):
        if hi - lo <= LAMBDA_WIDTH * lam_c:
            return _settle(u, (below, above))
        mid = 0.5 * (lo + hi)
        traj = shoot(model, u, mid)
        if traj.terminal is Terminal.CONVERGED:
            return mid, traj
        if traj.terminal is Terminal.ESCAPED:
            lo, below = mid, traj
        else:
            hi, above = mid, traj
    raise KineticError(f"speed bisection from {u} did not converge", {"u_minus": u, "bracket": (lo, hi)})


def kinetic_value(model, u, pair=None):
    """phi_flat(u) of the regularized model: the far state reached by the
    heteroclinic orbit, or phi_natural(u) when the shock is classical."""
    if abs(u) <= DEGENERACY_THRESHOLD:
        return 0.0
    lam, traj = connection(model, u)
    nat = tangent(model.flux, u)
    if traj is None:
        return nat
    far = traj.far
    s = np.sign(u)
    zero = zero_dissipation(pair or quadratic_entropy(model.flux), u)
    if not (s * (far - zero) > 0 and s * (far - nat) <= 1e-9 * abs(u)):
        raise KineticError(f"traveling-wave far state {far} from {u} is not pinched",
                           {"u_minus": u, "lam": lam, "natural": nat, "zero_dissipation": zero})
    return float(far)


def slope_at_zero(u_minus, u_plus):
    """Polynomial extrapolation of u_plus / u_minus to u_minus -> 0 through the three smallest |u_minus|."""
    u_minus, u_plus = np.asarray(u_minus, dtype=float), np.asarray(u_plus, dtype=float)
    order = np.argsort(np.abs(u_minus))[:3]
    x = np.abs(u_minus[order])
    ratios = u_plus[order] / u_minus[order]
    coeffs = np.polyfit(x, ratios, len(x) - 1)
    return float(np.polyval(coeffs, 0.0))


def kinetic_table(model, u_grid, pair=None, workers=None, run_id=None):
    pair = pair or quadratic_entropy(model.flux)
    u_grid = [float(u) for u in u_grid]
    if any(abs(u) <= DEGENERACY_THRESHOLD for u in u_grid):
        raise ConfigError("traveling-wave kinetic grid must not contain 0")
    if len(u_grid) < MIN_TABLE_ROWS:
        raise ConfigError(f"traveling-wave kinetic grid needs at least {MIN_TABLE_ROWS} points")
    run_id = run_id or f"tw-{model.flux.name}-{model.alpha!r}-{model.p!r}"
    values = run_sweep(run_id, lambda u: kinetic_value(model, u, pair), u_grid, workers=workers, label="tw")
    rows = validate_rows(list(zip(u_grid, values)), pair)
    slope = slope_at_zero([r[0] for r in rows], [r[1] for r in rows])
    logger.info(f"kinetic table alpha={model.alpha!r} p={model.p!r}: {len(rows)} rows, slope at 0 {slope:.6g}")
    return KineticTable(rows=rows, flux_name=model.flux.name, slope_at_zero=slope,
                        metadata={"source": "traveling-wave", "alpha": repr(model.alpha), "p": repr(model.p)})


def classical_threshold(flux, p, u, alpha_range=ALPHA_RANGE):
    """Smallest alpha for which the shock leaving u stays classical (p <= 1/3)."""
    if p > 1.0 / 3.0:
        raise ConfigError(f"classical threshold needs p <= 1/3, got {p}")
    lo, hi = alpha_range
    if is_classical(TwModel(flux, lo, p), u):
        raise KineticError(f"shock from {u} is already classical at alpha={lo}", {"u_minus": u})
    if not is_classical(TwModel(flux, hi, p), u):
        raise KineticError(f"shock from {u} is still nonclassical at alpha={hi}", {"u_minus": u})
    while hi / lo - 1.0 > ALPHA_RTOL:
        mid = np.sqrt(lo * hi)
        if is_classical(TwModel(flux, mid, p), u):
            hi = mid
        else:
            lo = mid
    return float(np.sqrt(lo * hi))
