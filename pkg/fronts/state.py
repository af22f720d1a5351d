from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Tuple

import numpy as np

from config import DEGENERACY_THRESHOLD, FAN_STEP_FACTOR
from core.flux import chord
from core.kinetic import KineticFunction, zero_dissipation
from errors import ConfigError
from riemann.solver import WaveKind, solve_riemann


class FrontKind(Enum):
    CLASSICAL = "ClassicalShockFront"
    NONCLASSICAL = "NonclassicalShockFront"
    RAREFACTION = "RarefactionFront"


@dataclass(frozen=True)
class Front:
    position: float
    speed: float
    u_left: float
    u_right: float
    kind: FrontKind


@dataclass(frozen=True)
class Functionals:
    V: float
    TV: float
    mass: float


@dataclass(frozen=True)
class FrontState:
    """Piecewise-constant solution: far-left state, then the fronts in order.

    Positions refer to ``time``.  Fronts emitted by one Riemann solve share a
    position and are ordered by speed.
    """
    time: float
    fronts: Tuple[Front, ...]
    u_far_left: float
    u_far_right: float
    window: Tuple[float, float]
    fan_step: float
    kin: KineticFunction = field(repr=False, compare=False)
    dropped_mass: float = 0.0

    def states(self):
        return [self.u_far_left] + [f.u_right for f in self.fronts]


@lru_cache(maxsize=65536)
def psi(pair, u):
    """u on the positive side, phi_flat_0(u) on the negative side."""
    if u >= 0:
        return u
    return zero_dissipation(pair, u)


def generalized_strength(pair, u_minus, u_plus):
    return abs(psi(pair, u_minus) - psi(pair, u_plus))


def functionals(state, pair):
    V = sum(generalized_strength(pair, f.u_left, f.u_right) for f in state.fronts)
    TV = sum(abs(f.u_right - f.u_left) for f in state.fronts)
    return Functionals(V=float(V), TV=float(TV), mass=mass(state))


def profile(state, x):
    """u(state.time, x), left-continuous at fronts."""
    u = state.u_far_left
    for f in state.fronts:
        if x <= f.position:
            return u
        u = f.u_right
    return u


def mass(state):
    """int over the window of the piecewise-constant profile."""
    a, b = state.window
    left, total = a, 0.0
    u = state.u_far_left
    for f in state.fronts:
        right = min(max(f.position, a), b)
        total += u * (right - left)
        left, u = right, f.u_right
    return float(total + u * (b - left))


def fronts_from_pattern(pattern, position, fan_step):
    """Fronts of a Riemann pattern placed at ``position``; fans are split into
    pieces of size at most fan_step travelling at their chord speeds."""
    flux = pattern.flux
    out = []
    for w in pattern.waves:
        if w.kind is WaveKind.RAREFACTION:
            n = max(1, int(np.ceil(abs(w.u_plus - w.u_minus) / fan_step)))
            states = np.linspace(w.u_minus, w.u_plus, n + 1)
            states[0], states[-1] = w.u_minus, w.u_plus
            for a, b in zip(states[:-1], states[1:]):
                out.append(Front(position, chord(flux, float(a), float(b)), float(a), float(b),
                                 FrontKind.RAREFACTION))
        else:
            kind = FrontKind.NONCLASSICAL if w.kind is WaveKind.NONCLASSICAL_SHOCK else FrontKind.CLASSICAL
            out.append(Front(position, w.speed_lo, w.u_minus, w.u_plus, kind))
    return out


def init_from_data(sampler, window, n_cells, fan_step, kin):
    """Cell averages of ``sampler`` on n_cells cells of the window, then one
    Riemann solve per interior interface."""
    a, b = window
    if not b > a or n_cells < 1:
        raise ConfigError(f"bad front-tracking window {window} with {n_cells} cells")
    h = (b - a) / n_cells
    values = [float(sampler(a + (i + 0.5) * h)) for i in range(n_cells)]
    if fan_step is None or fan_step <= 0:
        fan_step = FAN_STEP_FACTOR * max(max(abs(v) for v in values), DEGENERACY_THRESHOLD)
    fronts = []
    for i in range(1, n_cells):
        if values[i - 1] == values[i]:
            continue
        pattern = solve_riemann(kin.flux, kin.pair, kin, values[i - 1], values[i])
        fronts.extend(fronts_from_pattern(pattern, a + i * h, fan_step))
    return FrontState(time=0.0, fronts=tuple(fronts), u_far_left=values[0], u_far_right=values[-1],
                      window=(a, b), fan_step=fan_step, kin=kin)


def strength_bounds(pair, kin, u_max, samples=200):
    """(C_lower, C_upper) with C_lower |u+ - u-| <= sigma <= C_upper |u+ - u-| for
    admissible waves in [-u_max, u_max], estimated on a grid."""
    grid = np.geomspace(1e-3 * u_max, u_max, samples)
    psi_neg = np.array([psi(pair, -u) for u in grid])
    slopes = np.abs(np.diff(np.concatenate([[0.0], psi_neg])) / np.diff(np.concatenate([[0.0], grid])))
    upper = max(1.0, float(np.max(slopes)))
    lower = min(1.0, float(np.min(slopes)))
    for s in (1.0, -1.0):
        for u in s * grid:
            partners = [kin(u)]
            nat = kin.natural(u)
            partners += list(np.linspace(nat, 0.0, 5, endpoint=False))
            for v in partners:
                if v == u:
                    continue
                ratio = generalized_strength(pair, u, v) / abs(u - v)
                lower = min(lower, ratio)
                upper = max(upper, ratio)
    return float(lower), float(upper)


def sup_envelope(kin, u_max):
    """Largest |u| a Riemann solve can reach from data bounded by u_max."""
    return max(u_max, abs(kin(u_max)), abs(kin(-u_max)))
