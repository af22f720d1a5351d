from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import quad
from scipy.optimize import brentq

from config import DAMPING_EPS, ROOT_RTOL, ROOT_XTOL
from core.flux import FluxModel, chord
from errors import ConfigError

ROOT_IMAG_TOL = 1e-7


@dataclass(frozen=True)
class TwModel:
    """Traveling-wave ODE  w' = z,  z' = h(w) - alpha |z|^p z  for the
    regularization  u_t + f(u)_x = eps (|u_x|^p u_x)_x + alpha eps^2 u_xxx."""
    flux: FluxModel
    alpha: float
    p: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigError(f"traveling-wave alpha must be positive, got {self.alpha}")
        if not 0 <= self.p <= 1:
            raise ConfigError(f"traveling-wave exponent p must lie in [0, 1], got {self.p}")

    def damping(self, z):
        if self.p == 0:
            return z
        return (z * z + DAMPING_EPS ** 2) ** (0.5 * self.p) * z

    def h(self, w, u_minus, lam):
        return self.flux.f(w) - self.flux.f(u_minus) - lam * (w - u_minus)

    def dh(self, w, lam):
        return self.flux.df(w) - lam

    def rhs(self, u_minus, lam):
        def field(y, state):
            w, z = state
            return [z, self.h(w, u_minus, lam) - self.alpha * self.damping(z)]
        return field

    def potential(self, w, u_minus, lam):
        """int_{u_minus}^{w} h(s) ds; the energy z^2/2 - potential decreases along orbits."""
        if self.flux.coeffs is not None:
            anti = P.polyint(self.flux.coeffs)
            return float(P.polyval(w, anti) - P.polyval(u_minus, anti)
                         - self.flux.f(u_minus) * (w - u_minus) - 0.5 * lam * (w - u_minus) ** 2)
        return float(quad(lambda s: self.h(s, u_minus, lam), u_minus, w, epsabs=1e-14, epsrel=1e-12)[0])


def equilibria(model, u_minus, lam):
    """Real roots of h, sorted, with multiplicity; u_minus is always one of them."""
    flux = model.flux
    if flux.coeffs is not None:
        # h(w) / (w - u_minus) = chord(w, u_minus) - lam
        quotient = np.zeros(len(flux.coeffs) - 1)
        for n, c in enumerate(flux.coeffs):
            for k in range(n):
                quotient[k] += c * u_minus ** (n - 1 - k)
        quotient[0] -= lam
        roots = P.polyroots(quotient)
        scale = max(1.0, abs(u_minus))
        others = [float(r.real) for r in roots if abs(r.imag) <= ROOT_IMAG_TOL * scale]
    else:
        others = _sampled_roots(lambda w: chord(flux, w, u_minus) - lam, u_minus)
    return sorted(others + [float(u_minus)])


def _sampled_roots(q, u_minus, samples=4001):
    span = 8.0 * max(1.0, abs(u_minus))
    grid = np.linspace(u_minus - span, u_minus + span, samples)
    values = np.array([q(w) for w in grid])
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if fa == 0:
            roots.append(float(a))
        elif fa * fb < 0:
            roots.append(float(brentq(q, a, b, xtol=ROOT_XTOL * span, rtol=ROOT_RTOL)))
    return roots
