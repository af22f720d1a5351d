from dataclasses import dataclass, replace
from typing import List, Tuple

from loguru import logger

from config import BOUND_RTOL, COLLISION_WINDOW, FRONT_MIN_STRENGTH, INTERACTION_BUDGET, SPEED_TOL, STRENGTH_SAMPLES
from core.flux import entropy_dissipation
from errors import InteractionBudgetError, InvariantViolation, LabError, NumericalError
from fronts.state import (
    FrontKind, Functionals, fronts_from_pattern, functionals, strength_bounds, sup_envelope,
)
from riemann.solver import solve_riemann

V_TOL = 1e-12


@dataclass(frozen=True)
class Interaction:
    time: float
    indices: Tuple[int, ...]


@dataclass(frozen=True)
class Diagnostic:
    time: float
    functionals: Functionals
    n_fronts: int
    interaction: int


@dataclass
class CauchyResult:
    state: object
    diagnostics: List[Diagnostic]
    interactions: int
    lipschitz_rate: float
    entropy_production: float
    tv_bound: float
    sup_bound: float


def _collision_time(state, i):
    left, right = state.fronts[i], state.fronts[i + 1]
    closing = left.speed - right.speed
    if closing <= SPEED_TOL * max(1.0, abs(left.speed), abs(right.speed)):
        return None
    return state.time + max(right.position - left.position, 0.0) / closing


def next_interaction(state):
    """Earliest collision of adjacent fronts; simultaneous contiguous collisions
    at one point are grouped."""
    times = [_collision_time(state, i) for i in range(len(state.fronts) - 1)]
    candidates = [(t, i) for i, t in enumerate(times) if t is not None]
    if not candidates:
        return None
    t_min, first = min(candidates)
    indices = [first, first + 1]
    j = first + 1
    while j < len(times) and times[j] is not None and times[j] <= t_min + COLLISION_WINDOW:
        indices.append(j + 1)
        j += 1
    j = first - 1
    while j >= 0 and times[j] is not None and times[j] <= t_min + COLLISION_WINDOW:
        indices.insert(0, j)
        j -= 1
    return Interaction(time=t_min, indices=tuple(indices))


def advance(state, t):
    dt = t - state.time
    fronts = tuple(replace(f, position=f.position + f.speed * dt) for f in state.fronts)
    return replace(state, time=t, fronts=fronts)


def _drop_weak(fronts, state):
    out, dropped = [], 0.0
    a, b = state.window
    for k, f in enumerate(fronts):
        if abs(f.u_right - f.u_left) >= FRONT_MIN_STRENGTH:
            out.append(f)
            continue
        nxt = fronts[k + 1].position if k + 1 < len(fronts) else b
        dropped += (f.u_right - f.u_left) * max(min(nxt, b) - max(f.position, a), 0.0)
        if k + 1 < len(fronts):
            fronts[k + 1] = replace(fronts[k + 1], u_left=f.u_left)
    return out, dropped


def resolve_interaction(state, event):
    """Replace the colliding fronts by the Riemann solution between the outer states."""
    state = advance(state, event.time)
    kin = state.kin
    first, last = event.indices[0], event.indices[-1]
    involved = state.fronts[first:last + 1]
    u_l, u_r = involved[0].u_left, involved[-1].u_right
    x = sum(f.position for f in involved) / len(involved)
    try:
        pattern = solve_riemann(kin.flux, kin.pair, kin, u_l, u_r)
    except LabError as exc:
        raise NumericalError(f"interaction at t={event.time}, x={x} between {u_l} and {u_r} failed: {exc}") from exc
    new = fronts_from_pattern(pattern, x, state.fan_step)
    fronts = list(state.fronts[:first]) + new + list(state.fronts[last + 1:])
    fronts, dropped = _drop_weak(fronts, state)
    far_right = fronts[-1].u_right if fronts else state.u_far_left
    return replace(state, fronts=tuple(fronts), u_far_right=far_right,
                   dropped_mass=state.dropped_mass + dropped)


def _rates(state, pair):
    lipschitz = sum(abs(f.speed) * abs(f.u_right - f.u_left) for f in state.fronts)
    production = sum(entropy_dissipation(pair, f.u_left, f.u_right)
                     for f in state.fronts if f.kind is not FrontKind.RAREFACTION)
    return lipschitz, production


def run_bounds(state0):
    """(TV bound, sup bound) for a run from state0: (C_upper / C_lower) TV(u0) and the
    reachable-state envelope of the Riemann solver."""
    u_max = max(abs(s) for s in state0.states())
    if u_max == 0:
        return 0.0, 0.0
    lower, upper = strength_bounds(state0.kin.pair, state0.kin, u_max, samples=STRENGTH_SAMPLES)
    tv0 = sum(abs(f.u_right - f.u_left) for f in state0.fronts)
    return upper / lower * tv0, sup_envelope(state0.kin, u_max)


def check_bounds(state, values, tv_bound, sup_bound):
    if values.TV > tv_bound * (1 + BOUND_RTOL) + V_TOL:
        raise InvariantViolation(f"TV {values.TV!r} exceeds the equivalence bound {tv_bound!r} at t={state.time!r}")
    top = max(abs(s) for s in state.states())
    if top > sup_bound * (1 + BOUND_RTOL):
        raise InvariantViolation(f"state {top!r} leaves the sup-norm envelope {sup_bound!r} at t={state.time!r}")


def run_cauchy(state0, t_end, budget=INTERACTION_BUDGET):
    """Advance the front state to t_end, checking that V never increases and that
    TV and the sup norm stay inside their a priori bounds."""
    pair = state0.kin.pair
    state = state0
    tv_bound, sup_bound = run_bounds(state0)
    diagnostics = [Diagnostic(state.time, functionals(state, pair), len(state.fronts), 0)]
    count, lipschitz, production = 0, 0.0, 0.0
    while True:
        event = next_interaction(state)
        done = event is None or event.time > t_end
        t_next = t_end if done else event.time
        rate, dissipation = _rates(state, pair)
        lipschitz = max(lipschitz, rate)
        production += dissipation * (t_next - state.time)
        if done:
            state = advance(state, t_end)
            break
        count += 1
        if count > budget:
            raise InteractionBudgetError(f"more than {budget} interactions before t={t_end}", state=state)
        before = diagnostics[-1].functionals.V
        state = resolve_interaction(state, event)
        values = functionals(state, pair)
        if values.V > before + V_TOL:
            raise InvariantViolation(f"V increased from {before!r} to {values.V!r} at t={state.time!r}")
        check_bounds(state, values, tv_bound, sup_bound)
        diagnostics.append(Diagnostic(state.time, values, len(state.fronts), count))
    diagnostics.append(Diagnostic(state.time, functionals(state, pair), len(state.fronts), count))
    logger.info(f"front tracking to t={t_end}: {count} interactions, {len(state.fronts)} fronts")
    return CauchyResult(state=state, diagnostics=diagnostics, interactions=count,
                        lipschitz_rate=lipschitz, entropy_production=production,
                        tv_bound=tv_bound, sup_bound=sup_bound)
