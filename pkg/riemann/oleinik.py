"""Classical (Oleinik) Riemann solutions from convex envelopes of the flux.

Independent of the kinetic machinery: the solution for u_l < u_r follows the
lower convex envelope of f on [u_l, u_r]; for u_l > u_r the upper concave
envelope traversed from right to left.
"""
import numpy as np
from loguru import logger
from scipy.optimize import brentq
from scipy.spatial import ConvexHull

from config import ROOT_RTOL, ROOT_XTOL
from riemann.solver import Wave, WaveKind, WavePattern

CHORD_DEVIATION = 1e-9


def _envelope_indices(points, lower):
    hull = ConvexHull(points)
    vertices = list(hull.vertices)
    start = vertices.index(int(np.argmin(points[:, 0])))
    vertices = vertices[start:] + vertices[:start]
    stop = vertices.index(int(np.argmax(points[:, 0])))
    if lower:
        chain = vertices[:stop + 1]
    else:
        chain = ([vertices[0]] + vertices[stop:][::-1])
    return sorted(chain)


def _refine_tangency(flux, anchor, i, u):
    q = lambda t: flux.df(t) * (t - anchor) - (flux.f(t) - flux.f(anchor))
    lo, hi = max(i - 1, 0), min(i + 1, len(u) - 1)
    for _ in range(8):
        if q(u[lo]) * q(u[hi]) <= 0:
            return float(brentq(q, u[lo], u[hi], xtol=ROOT_XTOL * max(1.0, abs(u[i])), rtol=ROOT_RTOL))
        lo, hi = max(lo - 1, 0), min(hi + 1, len(u) - 1)
    logger.warning(f"tangency from {anchor} near {u[i]} not bracketed; keeping the sample point")
    return float(u[i])


def envelope_pieces(flux, u_l, u_r, samples=4001):
    """Pieces ('fan', a, b) and ('jump', a, b) of the envelope, ordered from u_l to u_r."""
    lo, hi = min(u_l, u_r), max(u_l, u_r)
    u = np.linspace(lo, hi, samples)
    f = flux.f(u)
    chain = _envelope_indices(np.column_stack([u, f]), lower=u_l < u_r)
    scale = max(1.0, float(np.max(np.abs(f))))
    pieces = []
    for i, j in zip(chain[:-1], chain[1:]):
        a, b = float(u[i]), float(u[j])
        if j - i > 1:
            inner = u[i + 1:j]
            line = f[i] + (f[j] - f[i]) * (inner - a) / (b - a)
            if np.max(np.abs(flux.f(inner) - line)) > CHORD_DEVIATION * scale:
                if i == 0 and j < samples - 1:
                    b = _refine_tangency(flux, lo, j, u)
                elif j == samples - 1 and i > 0:
                    a = _refine_tangency(flux, hi, i, u)
                pieces.append(["jump", a, b])
                continue
        if pieces and pieces[-1][0] == "fan":
            pieces[-1][2] = b
        else:
            pieces.append(["fan", a, b])
    for k in range(1, len(pieces)):
        if pieces[k][0] == "jump":
            pieces[k - 1][2] = pieces[k][1]
        else:
            pieces[k][1] = pieces[k - 1][2]
    pieces[0][1], pieces[-1][2] = lo, hi
    if u_l > u_r:
        pieces = [[kind, b, a] for kind, a, b in reversed(pieces)]
    return [tuple(p) for p in pieces]


def oleinik_pattern(flux, u_l, u_r, samples=4001):
    """WavePattern of the classical solution built from the envelope pieces."""
    if u_l == u_r:
        return WavePattern(u_l, u_r, (), flux)
    waves = []
    for kind, a, b in envelope_pieces(flux, u_l, u_r, samples):
        if a == b:
            continue
        if kind == "fan":
            waves.append(Wave(WaveKind.RAREFACTION, a, b, float(flux.df(a)), float(flux.df(b))))
        else:
            s = float((flux.f(a) - flux.f(b)) / (a - b))
            waves.append(Wave(WaveKind.CLASSICAL_SHOCK, a, b, s, s))
    return WavePattern(u_l, u_r, tuple(waves), flux)
