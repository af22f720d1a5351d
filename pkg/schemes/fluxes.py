"""Entropy-conservative interface fluxes written in the entropy variable v = U'(u).

Each numerical flux g* comes with a numerical entropy flux G* such that
v_j (g*_{j+1/2} - g*_{j-1/2}) = G*_{j+1/2} - G*_{j-1/2} for every grid function.
"""
import numpy as np

from config import GAUSS_POINTS
from errors import ConfigError

B_STAR_MODES = ("mean", "central")
ORDERS = (2, 3, 4)
# observed truncation order; the five-point flux reduces to the fourth-order central flux for linear g
EXPECTED_ORDERS = {2: 2, 3: 4, 4: 4}
ORDER_SLACK = 0.3

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_POINTS)
_S = 0.5 * (_NODES + 1.0)
_W = 0.5 * _WEIGHTS


def flux_of_v(pair, v):
    return pair.flux.f(pair.to_conserved(v))


def potential(pair, v):
    """psi(v) = v g(v) - G(v)."""
    u = pair.to_conserved(v)
    return v * pair.flux.f(u) - pair.F(u)


def b_coefficient(pair, v):
    """g'(v) = f'(u) / U''(u)."""
    u = pair.to_conserved(v)
    return pair.flux.df(u) / pair.d2U(u)


def ec_flux_2pt(pair, v0, v1):
    """int_0^1 g(v0 + s (v1 - v0)) ds; exact divided sums for polynomial fluxes with U = u^2/2."""
    v0 = np.asarray(v0, dtype=float)
    v1 = np.asarray(v1, dtype=float)
    coeffs = pair.flux.coeffs
    if pair.quadratic and coeffs is not None:
        total = np.zeros(np.broadcast(v0, v1).shape)
        for n, c in enumerate(coeffs):
            if c:
                total = total + c / (n + 1) * sum(v0 ** k * v1 ** (n - k) for k in range(n + 1))
        return total
    v = v0[..., None] + _S * (v1 - v0)[..., None]
    return np.sum(_W * flux_of_v(pair, v), axis=-1)


def _b_star(pair, a, b, c, mode):
    if mode == "central":
        return b_coefficient(pair, b)
    return b_coefficient(pair, (a + b + c) / 3.0)


def _psi_star(pair, a, b, c, mode):
    return potential(pair, b) + (b - a) * _b_star(pair, a, b, c, mode) * (b - c) / 12.0


def _check(order, mode):
    if order not in ORDERS:
        raise ConfigError(f"entropy-conservative flux order must be one of {ORDERS}, got {order}")
    if mode not in B_STAR_MODES:
        raise ConfigError(f"b_star must be one of {B_STAR_MODES}, got {mode!r}")


def ec_flux(pair, vm1, v0, v1, v2, order=3, b_star="mean"):
    """g*_{j+1/2} from the stencil (v_{j-1}, v_j, v_{j+1}, v_{j+2})."""
    _check(order, b_star)
    g2 = ec_flux_2pt(pair, v0, v1)
    if order == 2:
        return g2
    if order == 3:
        return g2 - ((v2 - v1) * _b_star(pair, v0, v1, v2, b_star)
                     - (v0 - vm1) * _b_star(pair, vm1, v0, v1, b_star)) / 12.0
    return 4.0 / 3.0 * g2 - (ec_flux_2pt(pair, vm1, v1) + ec_flux_2pt(pair, v0, v2)) / 6.0


def _entropy_flux_2pt(pair, a, b):
    return 0.5 * (a + b) * ec_flux_2pt(pair, a, b) - 0.5 * (potential(pair, a) + potential(pair, b))


def ec_entropy_flux(pair, vm1, v0, v1, v2, order=3, b_star="mean"):
    """G*_{j+1/2} matching ec_flux on the same stencil."""
    _check(order, b_star)
    if order == 2:
        return _entropy_flux_2pt(pair, v0, v1)
    if order == 3:
        g = ec_flux(pair, vm1, v0, v1, v2, 3, b_star)
        return 0.5 * (v0 + v1) * g - 0.5 * (_psi_star(pair, v0, v1, v2, b_star)
                                             + _psi_star(pair, vm1, v0, v1, b_star))
    return 4.0 / 3.0 * _entropy_flux_2pt(pair, v0, v1) - (
        _entropy_flux_2pt(pair, vm1, v1) + _entropy_flux_2pt(pair, v0, v2)) / 6.0
