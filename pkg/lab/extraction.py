from dataclasses import dataclass, field
from typing import Dict

import numpy as np
from loguru import logger
from sklearn.cluster import DBSCAN

from config import FLAT_SLOPE, MIN_FLAT_WINDOW, OSCILLATION_BUFFER
from riemann.solver import ShockClass, classify_shock


@dataclass(frozen=True)
class PlateauPair:
    u_minus: float
    u_plus: float
    confidence: float
    noise: float = 0.0
    run_metadata: Dict[str, object] = field(default_factory=dict, compare=False)


def _flat_cells(u, tol):
    du = np.abs(np.diff(u))
    left = np.concatenate([[0.0], du])
    right = np.concatenate([du, [0.0]])
    return np.flatnonzero((left <= tol) & (right <= tol))


def _plateaus(u, idx, tol, min_window):
    """Runs of flat cells with slowly varying values, via DBSCAN on (index, value / tol)."""
    if len(idx) == 0:
        return []
    features = np.column_stack([idx.astype(float), u[idx] / tol])
    labels = DBSCAN(eps=1.5, min_samples=1).fit(features).labels_
    runs = [idx[labels == lab] for lab in np.unique(labels)]
    return [r for r in runs if len(r) >= min_window]


def plateau_score(left, right, u, jump, min_window):
    length = min(len(left), len(right)) / (4.0 * min_window)
    spread = max(np.ptp(u[left]), np.ptp(u[right])) / jump
    return float(max(1e-3, min(1.0, length) * max(0.0, 1.0 - 10.0 * spread)))


def extract_pair(cells, flux, flat_slope=FLAT_SLOPE, buffer=OSCILLATION_BUFFER,
                 min_window=MIN_FLAT_WINDOW, metadata=None):
    """Plateau states on both sides of the steepest decreasing transition.

    Returns None unless the pair is an undercompressive shock of ``flux``.
    """
    u = np.asarray(cells, dtype=float)
    jump = float(np.ptp(u))
    if jump == 0:
        return None
    du = np.diff(u)
    k = int(np.argmin(du))
    if du[k] >= 0:
        return None
    tol = flat_slope * jump
    # widen the transition to the whole non-flat run around the steepest step
    lo, hi = k, k + 1
    while lo > 0 and abs(du[lo - 1]) > tol:
        lo -= 1
    while hi < len(du) and abs(du[hi]) > tol:
        hi += 1
    runs = _plateaus(u, _flat_cells(u, tol), tol, min_window)
    left = [r[r <= lo - buffer] for r in runs]
    left = [r for r in left if len(r) >= min_window]
    right = [r[r >= hi + buffer] for r in runs]
    right = [r for r in right if len(r) >= min_window]
    if not left or not right:
        logger.debug(f"no plateaus beyond {buffer} cells of the transition at cell {k}")
        return None
    left_run = max(left, key=lambda r: r.max())
    right_run = min(right, key=lambda r: r.min())
    u_minus, u_plus = float(np.median(u[left_run])), float(np.median(u[right_run]))
    if u_minus == u_plus:
        return None
    cls = classify_shock(flux, u_minus, u_plus)
    if cls not in (ShockClass.SLOW_UNDERCOMPRESSIVE, ShockClass.FAST_UNDERCOMPRESSIVE):
        logger.debug(f"plateaus ({u_minus:.6g}, {u_plus:.6g}) form a {cls.value} jump")
        return None
    return PlateauPair(u_minus=u_minus, u_plus=u_plus,
                       confidence=plateau_score(left_run, right_run, u, jump, min_window),
                       noise=float(max(np.ptp(u[left_run]), np.ptp(u[right_run]))),
                       run_metadata=dict(metadata or {}, transition=k))
