from dataclasses import dataclass, field, replace
from typing import List

import numpy as np
from loguru import logger

from config import DISPERSIVE_FACTOR, PARABOLIC_FACTOR
from errors import ConfigError, IntegrationError
from schemes.operators import GridState, controlled_dissipation_rhs


@dataclass
class Diagnostics:
    t: List[float] = field(default_factory=list)
    mass: List[float] = field(default_factory=list)
    entropy: List[float] = field(default_factory=list)
    dt: List[float] = field(default_factory=list)

    def record(self, cfg, state, dt):
        self.t.append(state.time)
        self.mass.append(float(np.sum(state.cells) * cfg.h))
        self.entropy.append(float(np.sum(cfg.pair.U(state.cells)) * cfg.h))
        self.dt.append(dt)


def time_step(cfg, u):
    speed = float(np.max(np.abs(cfg.flux.df(u))))
    limits = [cfg.h / max(speed, 1e-300)]
    if cfg.beta > 0:
        limits.append(PARABOLIC_FACTOR * cfg.h / cfg.beta)
    if cfg.alpha != 0:
        limits.append(DISPERSIVE_FACTOR * cfg.h / abs(cfg.alpha))
    return cfg.cfl * min(limits)


def _rk4(cfg, state, dt):
    k1 = controlled_dissipation_rhs(cfg, state)
    k2 = controlled_dissipation_rhs(cfg, GridState(state.time + dt / 2, state.cells + dt / 2 * k1))
    k3 = controlled_dissipation_rhs(cfg, GridState(state.time + dt / 2, state.cells + dt / 2 * k2))
    k4 = controlled_dissipation_rhs(cfg, GridState(state.time + dt, state.cells + dt * k3))
    return state.cells + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate(cfg, state0, t_end, record_every=1, dt=None):
    """Classical RK4 up to t_end; the last step is shortened to land on t_end.

    Fixed boundaries freeze the end values of state0 unless the config sets them.
    """
    state0.check(cfg)
    if t_end < state0.time:
        raise ConfigError(f"t_end={t_end} lies before the initial time {state0.time}")
    if cfg.boundary == "fixed" and cfg.boundary_states is None:
        cfg = replace(cfg, boundary_states=(float(state0.cells[0]), float(state0.cells[-1])))
    diagnostics = Diagnostics()
    diagnostics.record(cfg, state0, 0.0)
    state, steps = state0, 0
    while state.time < t_end:
        step = dt if dt is not None else time_step(cfg, state.cells)
        step = min(step, t_end - state.time)
        cells = _rk4(cfg, state, step)
        if not np.all(np.isfinite(cells)):
            raise IntegrationError(f"non-finite values after t={state.time}", state=state)
        time = t_end if step == t_end - state.time else state.time + step
        state = GridState(time, cells)
        steps += 1
        if steps % record_every == 0 or state.time >= t_end:
            diagnostics.record(cfg, state, step)
    logger.debug(f"integrated {cfg.n_cells} cells to t={t_end} in {steps} steps (order {cfg.order})")
    return state, diagnostics


def entropy_drift_ratio(cfg, cells, t_end, dt):
    """Entropy drift at step dt over the drift at dt / 2; near 2**4 when the flux conserves entropy."""
    drifts = []
    for step in (dt, dt / 2):
        _, diag = integrate(cfg, GridState(0.0, cells), t_end, dt=step)
        drifts.append(abs(diag.entropy[-1] - diag.entropy[0]))
    return drifts[0] / max(drifts[1], 1e-300)
