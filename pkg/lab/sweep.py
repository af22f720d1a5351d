from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from loguru import logger

from config import FAR_STATE_WEIGHT, MIN_TABLE_ROWS
from core.table import KineticTable, validate_rows
from errors import ConfigError, KineticError
from lab.extraction import extract_pair
from processing.pipeline import run_sweep
from schemes.integrate import integrate
from schemes.operators import GridState

MARGIN_CELLS = 40


def matched_tw_alpha(beta, alpha):
    """Traveling-wave damping of the scheme's regularization beta h u_xx + alpha h^2 u_xxx (p = 0)."""
    if not alpha > 0 or not beta > 0:
        raise ConfigError(f"matched traveling-wave alpha needs beta > 0 and alpha > 0, got {beta}, {alpha}")
    return beta / np.sqrt(alpha)


def refined(cfg):
    """Half the mesh at fixed physical diffusion and dispersion."""
    return replace(cfg, h=cfg.h / 2, beta=2 * cfg.beta, alpha=4 * cfg.alpha)


def inner_far_state(kin, weight=FAR_STATE_WEIGHT):
    """u_r = phi_flat(u) + weight (phi_sharp(u) - phi_flat(u)):
    a nonclassical shock followed by a classical one, well inside the two-wave range."""
    if not 0 < weight < 0.5:
        raise ConfigError(f"far-state weight must lie in (0, 1/2), got {weight}")

    def rule(u):
        flat = kin(u)
        return flat + weight * (kin.sharp(u) - flat)
    return rule


def riemann_run(template, u_minus, u_plus, t_end):
    """Scheme solution of the Riemann problem (u_minus, u_plus) centred at x = 0."""
    states = np.array([u_minus, u_plus, 0.0])
    speeds = template.flux.df(np.linspace(min(states), max(states), 201))
    reach = float(np.max(np.abs(speeds))) * t_end
    margin = 0.25 * reach + MARGIN_CELLS * template.h
    lo = min(0.0, float(np.min(speeds)) * t_end) - margin
    hi = reach + margin
    n_lo, n_hi = int(np.ceil(-lo / template.h)), int(np.ceil(hi / template.h))
    cfg = replace(template, domain=(-n_lo * template.h, n_hi * template.h), boundary="fixed",
                  boundary_states=(u_minus, u_plus))
    cells = np.where(cfg.x < 0, u_minus, u_plus).astype(float)
    state, _ = integrate(cfg, GridState(0.0, cells), t_end)
    return cfg, state


def numerical_kinetic_function(template, u_grid, far_state_rule, t_end, workers=None, run_id=None):
    """Kinetic table read off the scheme's Riemann solutions, one run per u_minus."""
    u_grid = [float(u) for u in u_grid]
    run_id = run_id or f"fd-order{template.order}-h{template.h!r}"

    def one(u):
        u_r = float(far_state_rule(u))
        cfg, state = riemann_run(template, u, u_r, t_end)
        return extract_pair(state.cells, cfg.flux, metadata={"u_right": u_r, "h": cfg.h, "order": cfg.order})

    pairs = run_sweep(run_id, one, u_grid, workers=workers, label="fd")
    rows = []
    for u, pair in zip(u_grid, pairs):
        if pair is None:
            logger.warning(f"no undercompressive plateau pair for u_minus={u}")
            continue
        rows.append((pair.u_minus, pair.u_plus))
    if len(rows) < MIN_TABLE_ROWS:
        raise KineticError(f"only {len(rows)} usable rows for the numerical kinetic function",
                           {"u_grid": u_grid})
    rows = validate_rows(rows, template.pair)
    return KineticTable(rows=rows, flux_name=template.flux.name,
                        metadata={"source": "finite-difference", "order": str(template.order),
                                  "alpha": repr(template.alpha), "beta": repr(template.beta),
                                  "h": repr(template.h)})


@dataclass(frozen=True)
class ComparisonReport:
    n_rows: int
    max_abs: float
    mean_abs: float
    max_rel: float
    mean_rel: float
    slope_deviation: Optional[float]

    def lines(self):
        out = [f"rows = {self.n_rows}", f"max_abs = {self.max_abs!r}", f"mean_abs = {self.mean_abs!r}",
               f"max_rel = {self.max_rel!r}", f"mean_rel = {self.mean_rel!r}"]
        if self.slope_deviation is not None:
            out.append(f"slope_deviation = {self.slope_deviation!r}")
        return out


def compare_tables(first, second):
    """Deviation of first's rows from second interpolated at first's u_minus;
    relative deviations are measured against |u_minus|."""
    u_a, v_a = first.u_minus(), first.u_plus()
    u_b, v_b = second.u_minus(), second.u_plus()
    inside = (u_a >= u_b.min()) & (u_a <= u_b.max())
    if not np.any(inside):
        raise KineticError("kinetic tables cover disjoint ranges",
                           {"first": (float(u_a.min()), float(u_a.max())),
                            "second": (float(u_b.min()), float(u_b.max()))})
    diff = np.abs(v_a[inside] - np.interp(u_a[inside], u_b, v_b))
    rel = diff / np.abs(u_a[inside])
    slope = None
    if first.slope_at_zero is not None and second.slope_at_zero is not None:
        slope = abs(first.slope_at_zero - second.slope_at_zero)
    return ComparisonReport(n_rows=int(np.sum(inside)), max_abs=float(diff.max()), mean_abs=float(diff.mean()),
                            max_rel=float(rel.max()), mean_rel=float(rel.mean()), slope_deviation=slope)
