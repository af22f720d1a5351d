from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import quad
from scipy.optimize import brentq

from config import (
    DEGENERACY_THRESHOLD, FD_CHECK_STEP, VALIDATION_UMAX, RH_TOL, DISSIPATION_TOL, ROOT_RTOL, ROOT_XTOL,
)
from errors import ConfigError, DegenerateShockError, InvariantViolation


def _test_grid(u_max=VALIDATION_UMAX, n=201):
    grid = np.linspace(-u_max, u_max, n)
    return grid[np.abs(grid) > 1e-8]


@dataclass(frozen=True)
class FluxModel:
    """Concave-convex flux with its inflection at u = 0.

    ``coeffs`` (low to high degree) is set for polynomial fluxes; chord slopes
    and entropy-conservative fluxes then use exact divided differences.
    """
    name: str
    f: Callable
    df: Callable
    d2f: Callable
    coeffs: Optional[Tuple[float, ...]] = None
    odd: bool = False

    def __post_init__(self):
        grid = _test_grid()
        if np.any(grid * self.d2f(grid) <= 0):
            raise ConfigError(f"flux {self.name!r} is not concave-convex on the test grid")
        if not (self.df(grid[0]) > self.df(0.0) and self.df(grid[-1]) > self.df(0.0)):
            raise ConfigError(f"flux {self.name!r}: f' does not grow at the grid extremes")
        h = FD_CHECK_STEP
        fd1 = (self.f(grid + h) - self.f(grid - h)) / (2 * h)
        fd2 = (self.df(grid + h) - self.df(grid - h)) / (2 * h)
        if np.max(np.abs(fd1 - self.df(grid)) / (1 + np.abs(self.df(grid)))) > 1e-5:
            raise ConfigError(f"flux {self.name!r}: df is not the derivative of f")
        if np.max(np.abs(fd2 - self.d2f(grid)) / (1 + np.abs(self.d2f(grid)))) > 1e-5:
            raise ConfigError(f"flux {self.name!r}: d2f is not the derivative of df")


def _monomial_chord(coeffs, a, b):
    # (f(a) - f(b)) / (a - b) = sum_n c_n sum_k a^k b^(n-1-k)
    total = 0.0
    for n, c in enumerate(coeffs):
        if n == 0 or c == 0:
            continue
        total = total + c * sum(a ** k * b ** (n - 1 - k) for k in range(n))
    return total


def cubic_flux():
    return FluxModel(
        name="cubic",
        f=lambda u: u ** 3,
        df=lambda u: 3 * u ** 2,
        d2f=lambda u: 6 * u,
        coeffs=(0.0, 0.0, 0.0, 1.0),
        odd=True,
    )


def cubic_linear_flux():
    return FluxModel(
        name="cubic_linear",
        f=lambda u: u ** 3 + u,
        df=lambda u: 3 * u ** 2 + 1,
        d2f=lambda u: 6 * u,
        coeffs=(0.0, 1.0, 0.0, 1.0),
        odd=True,
    )


def asym_cubic_flux():
    return FluxModel(
        name="asym_cubic",
        f=lambda u: np.where(u >= 0, 1.0, 2.0) * u ** 3,
        df=lambda u: np.where(u >= 0, 3.0, 6.0) * u ** 2,
        d2f=lambda u: np.where(u >= 0, 6.0, 12.0) * u,
    )


FLUXES = {
    "cubic": cubic_flux,
    "cubic_linear": cubic_linear_flux,
    "asym_cubic": asym_cubic_flux,
}


def get_flux(name):
    try:
        return FLUXES[name]()
    except KeyError:
        raise ConfigError(f"unknown flux {name!r}; known: {sorted(FLUXES)}") from None


def chord(flux, a, b):
    """Chord slope of f between a and b, with the tangent slope when a == b."""
    if a == b:
        return float(flux.df(a))
    if flux.coeffs is not None:
        return float(_monomial_chord(flux.coeffs, a, b))
    return float((flux.f(a) - flux.f(b)) / (a - b))


def shock_speed(flux, u_minus, u_plus):
    if u_minus == u_plus:
        raise DegenerateShockError(u_minus, u_plus)
    return chord(flux, u_minus, u_plus)


def oleinik_admissible(flux, u_minus, u_plus, n=200):
    """Oleinik chord condition: chords to u_+ from every v between the states
    are no steeper than the shock chord."""
    s = shock_speed(flux, u_minus, u_plus)
    v = np.linspace(u_minus, u_plus, n + 2)[1:-1]
    slopes = (flux.f(v) - flux.f(u_plus)) / (v - u_plus)
    return bool(np.all(slopes <= s + 1e-12 * max(1.0, abs(s))))


@dataclass(frozen=True)
class EntropyPair:
    name: str
    U: Callable
    dU: Callable
    d2U: Callable
    F: Callable
    flux: FluxModel = field(repr=False)
    inv_dU: Optional[Callable] = field(default=None, repr=False)
    quadratic: bool = False

    def __post_init__(self):
        grid = _test_grid(n=101)
        if np.any(self.d2U(grid) <= 0):
            raise ConfigError(f"entropy {self.name!r} is not strictly convex")
        h = FD_CHECK_STEP
        for u in grid[::10]:
            fd = (self.F(u + h) - self.F(u - h)) / (2 * h)
            target = self.flux.df(u) * self.dU(u)
            if abs(fd - target) > 1e-5 * (1 + abs(target)):
                raise ConfigError(f"entropy flux of {self.name!r} is not compatible with {self.flux.name!r} at u={u}")

    def to_conserved(self, v):
        if self.quadratic:
            return v
        if self.inv_dU is not None:
            return self.inv_dU(v)
        return np.vectorize(self._invert)(v)

    def _invert(self, v):
        lo, hi = -1.0, 1.0
        while self.dU(lo) > v:
            lo *= 2
        while self.dU(hi) < v:
            hi *= 2
        return brentq(lambda u: self.dU(u) - v, lo, hi, xtol=ROOT_XTOL, rtol=ROOT_RTOL)


def quadratic_entropy(flux):
    if flux.coeffs is not None:
        # F' = u f'(u) is a polynomial as well
        entropy_flux = P.polyint(P.polymul((0.0, 1.0), P.polyder(flux.coeffs)))
        F = lambda u: P.polyval(u, entropy_flux)
    else:
        F = np.vectorize(lambda u: quad(lambda s: s * flux.df(s), 0.0, u, epsabs=1e-14, epsrel=1e-13)[0])
    return EntropyPair(
        name="quadratic",
        U=lambda u: 0.5 * u ** 2,
        dU=lambda u: u,
        d2U=lambda u: np.ones_like(np.asarray(u, dtype=float)),
        F=F,
        flux=flux,
        inv_dU=lambda v: v,
        quadratic=True,
    )


def entropy_pair(flux, U, dU, d2U, name="custom", inv_dU=None):
    F = np.vectorize(lambda u: quad(lambda s: flux.df(s) * dU(s), 0.0, u, epsabs=1e-14, epsrel=1e-13)[0])
    return EntropyPair(name=name, U=U, dU=dU, d2U=d2U, F=F, flux=flux, inv_dU=inv_dU)


def capillarity_entropy(flux, c1, c2, name="capillarity"):
    """Entropy selected by the nonlinear diffusion-dispersion model: U'' = c2 / c1."""
    d2U = lambda u: c2(u) / c1(u)
    dU = np.vectorize(lambda u: quad(d2U, 0.0, u, epsabs=1e-14, epsrel=1e-13)[0])
    U = np.vectorize(lambda u: quad(lambda s: (u - s) * d2U(s), 0.0, u, epsabs=1e-14, epsrel=1e-13)[0])
    return entropy_pair(flux, U, dU, d2U, name=name)


ENTROPIES = {
    "quadratic": quadratic_entropy,
}


def get_entropy(name, flux):
    try:
        return ENTROPIES[name](flux)
    except KeyError:
        raise ConfigError(f"unknown entropy {name!r}; known: {sorted(ENTROPIES)}") from None


def entropy_dissipation(pair, u_minus, u_plus):
    lam = shock_speed(pair.flux, u_minus, u_plus)
    return float(-lam * (pair.U(u_plus) - pair.U(u_minus)) + pair.F(u_plus) - pair.F(u_minus))


def entropy_dissipation_integral(pair, u_minus, u_plus):
    """Integral form  -int U''(v) ((f(v) - f(u_-)) - (v - u_-) lam) dv."""
    flux = pair.flux
    lam = shock_speed(flux, u_minus, u_plus)
    f_minus = flux.f(u_minus)
    integrand = lambda v: pair.d2U(v) * ((flux.f(v) - f_minus) - (v - u_minus) * lam)
    value, _ = quad(integrand, u_minus, u_plus, epsabs=1e-14, epsrel=1e-13, limit=200)
    return float(-value)


def dissipation_slope(pair, u_minus, u_plus):
    """dE/du_+ = b(u_-, u_+) * d lam / du_+, with b > 0 the Bregman gap of U."""
    flux = pair.flux
    lam = shock_speed(flux, u_minus, u_plus)
    b = pair.U(u_minus) - pair.U(u_plus) - pair.dU(u_plus) * (u_minus - u_plus)
    return float(b * (flux.df(u_plus) - lam) / (u_plus - u_minus))


class ShockKind(Enum):
    CLASSICAL = "Classical"
    NONCLASSICAL = "Nonclassical"


@dataclass(frozen=True)
class ShockData:
    u_minus: float
    u_plus: float
    speed: float
    kind: ShockKind

    def check(self, pair):
        flux = pair.flux
        um, up = self.u_minus, self.u_plus
        residual = abs(-self.speed * (up - um) + flux.f(up) - flux.f(um))
        if residual > RH_TOL * (1 + abs(um) + abs(up)) ** 3:
            raise InvariantViolation(f"Rankine-Hugoniot residual {residual:.3e} for shock ({um}, {up})")
        if um != up and entropy_dissipation(pair, um, up) > DISSIPATION_TOL:
            raise InvariantViolation(f"shock ({um}, {up}) produces entropy")
        return self


def degenerate(u):
    return abs(u) <= DEGENERACY_THRESHOLD
