from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from config import DEGENERACY_THRESHOLD, KINETIC_TOL, ROOT_RTOL, SPEED_TOL
from core.flux import FluxModel, ShockData, ShockKind, entropy_dissipation, shock_speed
from core.kinetic import companion, tangent
from errors import InvariantViolation, RootFindError


class WaveKind(Enum):
    RAREFACTION = "Rarefaction"
    CLASSICAL_SHOCK = "ClassicalShock"
    NONCLASSICAL_SHOCK = "NonclassicalShock"


class ShockClass(Enum):
    LAX = "Lax"
    SLOW_UNDERCOMPRESSIVE = "SlowUndercompressive"
    FAST_UNDERCOMPRESSIVE = "FastUndercompressive"
    INADMISSIBLE = "Inadmissible"


@dataclass(frozen=True)
class Wave:
    kind: WaveKind
    u_minus: float
    u_plus: float
    speed_lo: float
    speed_hi: float

    @property
    def is_shock(self):
        return self.kind is not WaveKind.RAREFACTION

    def shock(self):
        kind = ShockKind.NONCLASSICAL if self.kind is WaveKind.NONCLASSICAL_SHOCK else ShockKind.CLASSICAL
        return ShockData(self.u_minus, self.u_plus, self.speed_lo, kind)


@dataclass(frozen=True)
class WavePattern:
    u_left: float
    u_right: float
    waves: Tuple[Wave, ...]
    flux: FluxModel = field(repr=False, compare=False)

    def speeds(self):
        return [(w.speed_lo, w.speed_hi) for w in self.waves]

    def describe(self):
        lines = [f"riemann u_left={self.u_left!r} u_right={self.u_right!r} waves={len(self.waves)}"]
        for w in self.waves:
            lines.append(f"  {w.kind.value} {w.u_minus!r} -> {w.u_plus!r} speed=[{w.speed_lo!r}, {w.speed_hi!r}]")
        return "\n".join(lines)

    def check(self, pair, kin=None):
        """Raise InvariantViolation unless the pattern is a well formed admissible solution."""
        flux = pair.flux
        if len(self.waves) > 2:
            raise InvariantViolation(f"{len(self.waves)} waves in a single Riemann pattern")
        state = self.u_left
        last_speed = -np.inf
        for w in self.waves:
            if w.u_minus != state:
                raise InvariantViolation(f"wave chain broken at {state} -> {w.u_minus}")
            state = w.u_plus
            if w.speed_lo < last_speed - SPEED_TOL * max(1.0, abs(last_speed)):
                raise InvariantViolation(f"wave speeds out of order: {last_speed} then {w.speed_lo}")
            last_speed = w.speed_hi
            if w.kind is WaveKind.RAREFACTION:
                samples = np.linspace(w.u_minus, w.u_plus, 9)
                curvature = np.sign(flux.d2f(samples[np.abs(samples) > DEGENERACY_THRESHOLD]))
                if not w.speed_lo <= w.speed_hi or len(set(curvature)) > 1:
                    raise InvariantViolation(f"rarefaction {w.u_minus} -> {w.u_plus} is not monotone")
                continue
            w.shock().check(pair)
            cls = classify_shock(flux, w.u_minus, w.u_plus)
            if w.kind is WaveKind.CLASSICAL_SHOCK and cls is not ShockClass.LAX:
                raise InvariantViolation(f"classical shock {w.u_minus} -> {w.u_plus} is {cls.value}")
            if w.kind is WaveKind.NONCLASSICAL_SHOCK:
                if cls is not ShockClass.SLOW_UNDERCOMPRESSIVE:
                    raise InvariantViolation(f"nonclassical shock {w.u_minus} -> {w.u_plus} is {cls.value}")
                if kin is not None and w.u_plus != kin(w.u_minus):
                    raise InvariantViolation(f"nonclassical shock from {w.u_minus} misses the kinetic relation")
        if state != self.u_right:
            raise InvariantViolation(f"pattern ends at {state}, expected {self.u_right}")
        return self


def classify_shock(flux, u_minus, u_plus):
    s = shock_speed(flux, u_minus, u_plus)
    a, b = float(flux.df(u_minus)), float(flux.df(u_plus))
    tol = SPEED_TOL * max(1.0, abs(s))
    if a >= s - tol and s >= b - tol:
        return ShockClass.LAX
    if min(a, b) >= s - tol:
        return ShockClass.SLOW_UNDERCOMPRESSIVE
    if max(a, b) <= s + tol:
        return ShockClass.FAST_UNDERCOMPRESSIVE
    return ShockClass.INADMISSIBLE


def _rarefaction(flux, a, b):
    return Wave(WaveKind.RAREFACTION, a, b, float(flux.df(a)), float(flux.df(b)))


def _shock(flux, a, b, kind):
    s = shock_speed(flux, a, b)
    return Wave(kind, a, b, s, s)


def _monotone(flux, u_l, u_r):
    # |u_l| at the inflection point: one classical wave on the side of u_r
    if flux.df(u_r) >= flux.df(u_l):
        return (_rarefaction(flux, u_l, u_r),)
    return (_shock(flux, u_l, u_r, WaveKind.CLASSICAL_SHOCK),)


def solve_riemann(flux, pair, kin, u_l, u_r):
    """Self-similar solution of the Riemann problem (u_l, u_r) selected by kin."""
    if u_l == u_r:
        return WavePattern(u_l, u_r, (), flux)
    if abs(u_l) <= DEGENERACY_THRESHOLD:
        return WavePattern(u_l, u_r, _monotone(flux, u_l, u_r), flux)
    s = 1.0 if u_l > 0 else -1.0
    if s * u_r >= s * u_l:
        return WavePattern(u_l, u_r, (_rarefaction(flux, u_l, u_r),), flux)
    sharp = companion(flux, kin, u_l)
    if s * u_r >= s * sharp:
        return WavePattern(u_l, u_r, (_shock(flux, u_l, u_r, WaveKind.CLASSICAL_SHOCK),), flux)
    flat = kin(u_l)
    nat = tangent(flux, u_l)
    sonic = abs(flat - nat) <= KINETIC_TOL * max(1.0, abs(u_l))
    first = _shock(flux, u_l, flat, WaveKind.CLASSICAL_SHOCK if sonic else WaveKind.NONCLASSICAL_SHOCK)
    if u_r == flat:
        return WavePattern(u_l, u_r, (first,), flux)
    if s * u_r > s * flat:
        second = _shock(flux, flat, u_r, WaveKind.CLASSICAL_SHOCK)
    else:
        second = _rarefaction(flux, flat, u_r)
    return WavePattern(u_l, u_r, (first, second), flux)


def inverse_speed(flux, xi, a, b):
    """The state between a and b where f' equals xi (f' is monotone there)."""
    lo, hi = min(a, b), max(a, b)
    if xi <= min(flux.df(lo), flux.df(hi)):
        return a if flux.df(a) <= flux.df(b) else b
    if xi >= max(flux.df(lo), flux.df(hi)):
        return b if flux.df(b) >= flux.df(a) else a
    scale = max(abs(lo), abs(hi), DEGENERACY_THRESHOLD)
    try:
        return float(brentq(lambda u: flux.df(u) - xi, lo, hi, xtol=1e-15 * scale, rtol=ROOT_RTOL))
    except ValueError as exc:
        raise RootFindError(f"rarefaction inverse at xi={xi}: {exc}", bracket=(lo, hi)) from exc


def evaluate(pattern, xi):
    """u(xi) of the self-similar solution, left-continuous at shocks."""
    state = pattern.u_left
    for w in pattern.waves:
        if xi <= w.speed_lo:
            return state
        if w.kind is WaveKind.RAREFACTION and xi < w.speed_hi:
            return inverse_speed(pattern.flux, xi, w.u_minus, w.u_plus)
        state = w.u_plus
    return state


def sample(pattern, xi):
    return np.array([evaluate(pattern, x) for x in np.atleast_1d(xi)])


def pattern_dissipation(pattern, pair):
    """Entropy produced per unit time by the shocks of the pattern."""
    return float(sum(entropy_dissipation(pair, w.u_minus, w.u_plus) for w in pattern.waves if w.is_shock))


def pattern_l1_distance(first, second, xi_range=None):
    """int |u1(xi) - u2(xi)| dxi, integrated piecewise between all wave speeds."""
    points = [s for p in (first, second) for w in p.waves for s in (w.speed_lo, w.speed_hi)]
    if xi_range is None:
        if not points:
            return 0.0 if first.u_left == second.u_left else np.inf
        xi_range = (min(points) - 1.0, max(points) + 1.0)
    lo, hi = xi_range
    cuts = sorted({lo, hi, *[p for p in points if lo < p < hi]})
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= a:
            continue
        gap = lambda x: abs(evaluate(first, x) - evaluate(second, x))
        value, _ = quad(gap, a, b, epsabs=1e-13, epsrel=1e-10, limit=100)
        total += value
    return float(total)


