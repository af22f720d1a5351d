"""Named cross-module checks run by ``kinlab validate``.

Each target takes the experiment config and returns (passed, detail).
"""
import time

import numpy as np
from loguru import logger

from config import WITNESS_FACTOR, WITNESS_NOISE_FLOOR
from core.flux import entropy_dissipation, get_flux, quadratic_entropy
from core.kinetic import KineticFunction, classical_kinetic, linear_kinetic, tabulated_kinetic, zero_dissipation
from errors import ConfigError, LabError
from fronts.state import init_from_data
from fronts.tracking import run_cauchy
from lab.extraction import extract_pair
from lab.sweep import (
    compare_tables, matched_tw_alpha, inner_far_state, numerical_kinetic_function, refined, riemann_run,
)
from riemann.oleinik import oleinik_pattern
from riemann.solver import evaluate, solve_riemann
from schemes.fluxes import EXPECTED_ORDERS, ORDER_SLACK, ORDERS
from schemes.integrate import entropy_drift_ratio, integrate, time_step
from schemes.operators import GridState, SchemeConfig, entropy_residual, flux_truncation_errors, observed_orders
from waves.kinetics import connection, kinetic_table, slope_at_zero
from waves.model import TwModel
from waves.shooting import tw_dissipation


def _cubic():
    flux = get_flux("cubic")
    return flux, quadratic_entropy(flux)


def _linear_family(pair, c):
    # the linear family is admissible for every c in (1/2, 1); endpoints are validated once
    return KineticFunction(phi_flat=lambda u: -c * u, lipschitz_bound=c, contraction_K=c * c,
                           description=f"linear c={c!r}", pair=pair, check=False)


def riemann_soundness(config):
    flux, pair = _cubic()
    for c in (0.55, 0.95):
        linear_kinetic(pair, c)
    rng = np.random.default_rng(config.seed)
    for _ in range(config.draws):
        kin = _linear_family(pair, rng.uniform(0.55, 0.95))
        u_l, u_r = rng.uniform(-3.0, 3.0, size=2)
        solve_riemann(flux, pair, kin, float(u_l), float(u_r)).check(pair, kin)
    return True, f"{config.draws} random Riemann problems"


def classical_limit(config):
    flux, pair = _cubic()
    kin = classical_kinetic(pair)
    rng = np.random.default_rng(config.seed + 1)
    draws = min(config.draws, 1000)
    worst = 0.0
    for _ in range(draws):
        u_l, u_r = (float(v) for v in rng.uniform(-2.0, 2.0, size=2))
        ours = solve_riemann(flux, pair, kin, u_l, u_r)
        oracle = oleinik_pattern(flux, u_l, u_r)
        shocks = [w.speed_lo for p in (ours, oracle) for w in p.waves if w.is_shock]
        speeds = [s for w in ours.waves for s in (w.speed_lo, w.speed_hi)] or [0.0]
        for xi in np.linspace(min(speeds) - 0.5, max(speeds) + 0.5, 41):
            if any(abs(xi - s) < 1e-6 for s in shocks):
                continue
            worst = max(worst, abs(evaluate(ours, xi) - evaluate(oracle, xi)))
    return worst <= 1e-9, f"max deviation from the convex-hull solution {worst:.3e} over {draws} problems"


def zero_dissipation_algebra(config):
    _, pair = _cubic()
    grid = np.concatenate([np.linspace(-3.0, -0.03, 50), np.linspace(0.03, 3.0, 50)])
    values = np.array([zero_dissipation(pair, u) for u in grid])
    closed = float(np.max(np.abs(values + grid)))
    involution = float(max(abs(zero_dissipation(pair, v) - u) for u, v in zip(grid, values)))
    ok = closed <= 1e-10 and involution <= 1e-8
    return ok, f"|phi0(u) + u| <= {closed:.2e}, involution residual {involution:.2e}"


def _three_state_run(pair, kin, states, gap=0.1):
    a, b, c = states
    speed = 3.0 * max(abs(s) for s in states) ** 2 + 1.0
    t_end = 0.9 / speed
    sampler = lambda x: a if x < 1.5 else (b if x < 1.5 + gap else c)
    state = init_from_data(sampler, (-1.0, 4.0), 50, 0.05, kin)
    return run_cauchy(state, t_end), t_end


def front_tracking(config):
    flux, pair = _cubic()
    rng = np.random.default_rng(config.seed + 2)
    runs = min(config.draws, 1000)
    witness, worst_mass = 0, 0.0
    for _ in range(runs):
        kin = _linear_family(pair, rng.uniform(0.55, 0.95))
        states = [float(v) for v in rng.uniform(-2.0, 2.0, size=3)]
        result, t_end = _three_state_run(pair, kin, states)
        diag = result.diagnostics
        for before, after in zip(diag[:-1], diag[1:]):
            if (after.functionals.TV > before.functionals.TV + 1e-12
                    and after.functionals.V <= before.functionals.V + 1e-12):
                witness += 1
                break
        expected = diag[0].functionals.mass + t_end * (flux.f(states[0]) - flux.f(states[2]))
        worst_mass = max(worst_mass, abs(diag[-1].functionals.mass + result.state.dropped_mass - expected))
    ok = witness > 0 and worst_mass <= 1e-10
    return ok, f"{runs} runs, {witness} with TV up and V down, mass residual {worst_mass:.2e}"


def entropy_conservation(config):
    _, pair = _cubic()
    drifts, residual = [], 0.0
    for order in (2, 3):
        cfg = SchemeConfig(pair=pair, order=order, beta=0.0, h=0.01, cfl=0.1, domain=(0.0, 1.0),
                           boundary="periodic")
        cells = 0.3 + 0.05 * np.sin(2 * np.pi * cfg.x)
        _, diag = integrate(cfg, GridState(0.0, cells), 1.0)
        drifts.append(abs(diag.entropy[-1] - diag.entropy[0]))
        rough = np.random.default_rng(config.seed + 3).uniform(-1.0, 1.0, 20)
        coarse = SchemeConfig(pair=pair, order=order, beta=0.0, h=0.1, domain=(0.0, 2.0), boundary="periodic")
        residual = max(residual, float(np.max(np.abs(entropy_residual(coarse, GridState(0.0, rough))))))
    ratio = _drift_ratio(pair)
    time_order = np.log2(ratio)
    ok = max(drifts) <= 1e-10 and residual <= 1e-13 and abs(time_order - 4.0) <= 0.5
    return ok, (f"entropy drift {max(drifts):.2e}, drift ratio under dt halving {ratio:.1f}, "
                f"per-cell identity residual {residual:.2e}")


def _drift_ratio(pair):
    cfg = SchemeConfig(pair=pair, order=2, beta=0.0, h=0.02, domain=(0.0, 1.0), boundary="periodic")
    cells = 0.3 + 0.1 * np.sin(2 * np.pi * cfg.x)
    return entropy_drift_ratio(cfg, cells, 1.0, 4 * time_step(cfg, cells))


def scheme_order(config):
    _, pair = _cubic()
    u0 = lambda x: 0.5 + 0.25 * np.sin(2 * np.pi * x)
    du0 = lambda x: 0.5 * np.pi * np.cos(2 * np.pi * x)
    n_list = [40, 80, 160, 320]
    details, ok = [], True
    for order in ORDERS:
        eoc = observed_orders(n_list, flux_truncation_errors(pair, order, n_list, u0, du0))[-1]
        ok = ok and abs(eoc - EXPECTED_ORDERS[order]) <= ORDER_SLACK
        details.append(f"order {order}: {eoc:.2f}")
    return ok, ", ".join(details)


def _tw_slope(flux, p, alpha, grid):
    table = kinetic_table(TwModel(flux, alpha, p), grid)
    return slope_at_zero(table.u_minus(), table.u_plus())


def tw_asymptotics(config):
    flux, _ = _cubic()
    small = (0.01, 0.02, 0.04)
    s0 = _tw_slope(flux, 0.0, 1.0, (0.1, 0.2, 0.4))
    s04 = _tw_slope(flux, 0.4, 5.0, small)
    s1 = _tw_slope(flux, 1.0, 1.0, small)
    half = [_tw_slope(flux, 0.5, a, (0.2, 0.4, 0.8)) for a in (0.2, 1.0, 5.0)]
    ok = (abs(s0 + 0.5) <= 0.05 and abs(s04 + 0.5) <= 0.05 and abs(s1 + 1.0) <= 0.05
          and all(-1.0 < s < -0.5 for s in half) and half[0] < half[1] < half[2])
    return ok, f"p=0: {s0:.4f}, p=0.4: {s04:.4f}, p=1: {s1:.4f}, p=1/2: {', '.join(f'{s:.4f}' for s in half)}"


def tw_linearity(config):
    flux, _ = _cubic()
    table = kinetic_table(TwModel(flux, 1.0, 0.5), np.linspace(0.2, 2.0, 10))
    ratios = table.u_plus() / table.u_minus()
    variation = float((ratios.max() - ratios.min()) / abs(ratios.mean()))
    c = float(-ratios.mean())
    return variation <= 0.01 and 0.5 < c < 1.0, f"c_alpha = {c:.6f}, slope variation {variation:.2e}"


def tw_dissipation_identity(config):
    flux, pair = _cubic()
    worst, count = 0.0, 0
    for p, alpha in ((0.0, 0.5), (0.5, 1.0), (1.0, 1.0), (0.5, 0.3)):
        model = TwModel(flux, alpha, p)
        for u in (1.2, 1.6, 2.0, 2.4, 2.8):
            _, traj = connection(model, u)
            if traj is None:
                continue
            exact = entropy_dissipation(pair, u, traj.far)
            worst = max(worst, abs(tw_dissipation(traj, model, pair) - exact) / abs(exact))
            count += 1
    return worst <= 1e-6 and count >= 20, f"{count} orbits, worst relative deviation {worst:.2e}"


def kinetic_extraction(config):
    flux, pair = _cubic()
    grid = (1.5, 2.0, 2.5)
    reference = kinetic_table(TwModel(flux, matched_tw_alpha(1.0, 1.0), 0.0), grid)
    rule = inner_far_state(tabulated_kinetic(reference, pair))
    by_order = {}
    for order in (2, 3, 4):
        table = numerical_kinetic_function(SchemeConfig(pair=pair, order=order, alpha=1.0, beta=1.0, h=0.02),
                                           grid, rule, 1.2)
        by_order[order] = compare_tables(table, reference).max_rel
    fine = numerical_kinetic_function(refined(SchemeConfig(pair=pair, order=4, alpha=1.0, beta=1.0, h=0.02)),
                                      grid, rule, 1.2)
    finest = compare_tables(fine, reference).max_rel
    ok = finest <= 0.1 and finest <= by_order[4] + 1e-3 and by_order[2] >= by_order[3] - 1e-3 >= by_order[4] - 2e-3
    return ok, (f"max relative deviation by order {by_order}, refined order 4: {finest:.3e}")


def regularization_witness(config):
    _, pair = _cubic()
    plateaus = []
    for alpha in (0.5, 2.0):
        template = SchemeConfig(pair=pair, order=3, alpha=alpha, beta=1.0, h=0.02)
        cfg, state = riemann_run(template, 2.0, -1.0, 1.2)
        found = extract_pair(state.cells, cfg.flux)
        if found is None:
            return False, f"no plateau pair at alpha={alpha}"
        plateaus.append(found)
    gap = abs(plateaus[0].u_plus - plateaus[1].u_plus)
    noise = max(WITNESS_NOISE_FLOOR, *(p.noise for p in plateaus))
    detail = f"intermediate states {plateaus[0].u_plus:.5f} vs {plateaus[1].u_plus:.5f}, plateau noise {noise:.2e}"
    return gap > WITNESS_FACTOR * noise, detail


def dispersion_sign(config):
    _, pair = _cubic()
    found = {}
    for alpha in (1.0, -1.0):
        template = SchemeConfig(pair=pair, order=3, alpha=alpha, beta=1.0, h=0.02)
        cfg, state = riemann_run(template, 2.0, -0.8, 1.0)
        found[alpha] = extract_pair(state.cells, cfg.flux)
    ok = found[1.0] is not None and found[-1.0] is None
    shown = {a: "none" if p is None else f"{p.u_plus:.5f}" for a, p in found.items()}
    return ok, f"intermediate plateau at alpha=1: {shown[1.0]}, at alpha=-1: {shown[-1.0]}"


TARGETS = {
    "riemann_soundness": riemann_soundness,
    "classical_limit": classical_limit,
    "zero_dissipation": zero_dissipation_algebra,
    "front_tracking": front_tracking,
    "entropy_conservation": entropy_conservation,
    "scheme_order": scheme_order,
    "tw_asymptotics": tw_asymptotics,
    "tw_linearity": tw_linearity,
    "tw_dissipation": tw_dissipation_identity,
    "kinetic_extraction": kinetic_extraction,
    "regularization_witness": regularization_witness,
    "dispersion_sign": dispersion_sign,
}


def run_targets(config):
    names = list(TARGETS) if "all" in config.targets else list(config.targets)
    unknown = [n for n in names if n not in TARGETS]
    if unknown:
        raise ConfigError(f"unknown validate targets {unknown}; known: {sorted(TARGETS)}")
    results = []
    for name in names:
        start = time.perf_counter()
        try:
            ok, detail = TARGETS[name](config)
        except LabError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        logger.info(f"validate {name}: {'pass' if ok else 'FAIL'} in {time.perf_counter() - start:.1f}s ({detail})")
        results.append((name, ok, detail))
    return results
