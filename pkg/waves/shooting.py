from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable

import numpy as np
from loguru import logger
from scipy.integrate import solve_ivp

from config import (
    DEGENERACY_THRESHOLD, GRAZE_TOL, LAUNCH_OFFSET, MIDDLE_TOL, SADDLE_TOL, TW_ATOL, TW_BUDGET, TW_RTOL,
    TW_STIFF_RATIO,
)
from errors import ConfigError, IntegrationError, KineticError
from waves.model import equilibria

GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)


class Terminal(Enum):
    CONVERGED = "ConvergedToFarSaddle"
    CAPTURED = "CapturedByMiddle"
    ESCAPED = "Escaped"
    BUDGET = "BudgetExhausted"


@dataclass(frozen=True)
class TwTrajectory:
    u_minus: float
    lam: float
    y: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    dw: np.ndarray = field(repr=False)
    terminal: Terminal
    far: float
    middle: float
    dense: Callable = field(repr=False, compare=False)
    shift: float = 0.0

    @property
    def end_state(self):
        return float(self.w[-1]), float(self.dw[-1])

    def at(self, y):
        return self.dense(np.asarray(y) - self.shift)


def shifted(traj, dy):
    """The same orbit parametrized by y + dy."""
    return replace(traj, y=traj.y + dy, shift=traj.shift + dy)


def _unstable_rate(model, u_minus, lam):
    a = float(model.dh(u_minus, lam))
    if a <= 0:
        raise ConfigError(f"speed {lam} is not below f'(u_minus) = {float(model.flux.df(u_minus))}")
    if model.p == 0:
        return 0.5 * (-model.alpha + np.sqrt(model.alpha ** 2 + 4 * a))
    return float(np.sqrt(a))


def _event(fun, direction):
    fun.terminal = True
    fun.direction = direction
    return fun


def shoot(model, u_minus, lam, budget=TW_BUDGET):
    """Integrate the unstable manifold of (u_minus, 0) toward the other equilibria."""
    if abs(u_minus) <= DEGENERACY_THRESHOLD:
        raise ConfigError("cannot shoot from the inflection point")
    roots = equilibria(model, u_minus, lam)
    d = -1.0 if u_minus > 0 else 1.0
    side = [r for r in roots if d * (r - u_minus) > 0]
    if len(side) < 2:
        raise ConfigError(f"speed {lam} leaves fewer than three equilibria for u_minus={u_minus}")
    side.sort(key=lambda r: abs(r - u_minus))
    middle, far = side[0], side[-1]
    mu = _unstable_rate(model, u_minus, lam)
    scale = abs(u_minus)
    delta = min(LAUNCH_OFFSET * max(1.0, scale), 1e-4 * scale)
    start = [u_minus + d * delta, d * delta * mu]
    y_end = budget * max(1.0, 1.0 / mu)
    stiff = model.alpha ** 2 > TW_STIFF_RATIO * float(model.dh(u_minus, lam))

    turned = _event(lambda y, s: s[1], -d)
    passed_far = _event(lambda y, s: s[0] - far, d)
    near_far = _event(lambda y, s: np.hypot(s[0] - far, s[1]) - SADDLE_TOL * scale, -1)
    near_middle = _event(lambda y, s: np.hypot(s[0] - middle, s[1]) - MIDDLE_TOL * scale, -1)

    sol = solve_ivp(model.rhs(u_minus, lam), (0.0, y_end), start, method="LSODA" if stiff else "RK45",
                    rtol=TW_RTOL, atol=TW_ATOL * max(scale, 1e-3), dense_output=True,
                    events=[turned, passed_far, near_far, near_middle])
    if sol.status < 0:
        raise IntegrationError(f"traveling-wave integration failed: {sol.message}",
                               state={"u_minus": u_minus, "lam": lam})
    if sol.status == 0:
        terminal = Terminal.BUDGET
    else:
        fired = [k for k, times in enumerate(sol.t_events) if len(times)]
        k = fired[0]
        if k == 0 or k == 3:
            terminal = Terminal.CAPTURED
        elif k == 2:
            terminal = Terminal.CONVERGED
        else:
            graze = abs(sol.y[1, -1]) <= GRAZE_TOL * scale
            terminal = Terminal.CONVERGED if graze else Terminal.ESCAPED
    logger.trace(f"shoot u_minus={u_minus!r} lam={lam!r}: {terminal.value} at y={sol.t[-1]:.4g}")
    return TwTrajectory(u_minus=float(u_minus), lam=float(lam), y=sol.t, w=sol.y[0], dw=sol.y[1],
                        terminal=terminal, far=far, middle=middle, dense=sol.sol)


def closest_approach(traj, per_step=8):
    """(y, distance) of the sample nearest to the far saddle (far, 0), scaled by |u_minus|."""
    a, b = traj.y[:-1, None], traj.y[1:, None]
    s = np.linspace(0.0, 1.0, per_step + 1)[:-1]
    y = np.append((a + (b - a) * s).ravel(), traj.y[-1])
    w, z = traj.at(y)
    distance = np.hypot(w - traj.far, z) / abs(traj.u_minus)
    k = int(np.argmin(distance))
    return float(y[k]), float(distance[k])


def truncated(traj, y_end):
    """The orbit cut at y_end and marked as connecting."""
    keep = traj.y < y_end
    w, z = traj.at(y_end)
    return replace(traj, y=np.append(traj.y[keep], y_end), w=np.append(traj.w[keep], w),
                   dw=np.append(traj.dw[keep], z), terminal=Terminal.CONVERGED)


def _samples(traj):
    a, b = traj.y[:-1, None], traj.y[1:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * GAUSS_NODES).ravel()
    weights = (half * GAUSS_WEIGHTS).ravel()
    return nodes, weights


def tw_dissipation(traj, model, pair):
    """Entropy dissipated along a connecting orbit; equals E(u_minus, far).

    On an orbit cut at w the integral is E_lam(u_minus, w) - U'(w) h(w), which
    differs from E(u_minus, far) only to second order in w - far.
    """
    if traj.terminal is not Terminal.CONVERGED:
        raise KineticError(f"trajectory from {traj.u_minus} at speed {traj.lam} does not connect",
                           {"terminal": traj.terminal.value})
    nodes, weights = _samples(traj)
    w, z = traj.at(nodes)
    curvature = pair.d2U(w)
    dz = model.h(w, traj.u_minus, traj.lam) - model.alpha * model.damping(z)
    diffusive = -model.alpha * np.sum(weights * np.abs(z) ** (model.p + 2) * curvature)
    dispersive = -np.sum(weights * curvature * z * dz)
    return float(diffusive + dispersive)


def energy(traj, model):
    """z^2/2 - int h along the stored samples."""
    return np.array([0.5 * z * z - model.potential(w, traj.u_minus, traj.lam) for w, z in zip(traj.w, traj.dw)])
