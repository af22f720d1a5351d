import argparse
import os
import sys
from dataclasses import dataclass, field, fields, replace
from typing import Tuple

import numpy as np
from loguru import logger

from config import CFL_DEFAULT, OUTPUT_ROOT
from core.flux import get_entropy, get_flux
from core.kinetic import (
    classical_kinetic, cubic_diffusive_dispersive_kinetic, linear_kinetic, tabulated_kinetic,
)
from core.table import read_table
from errors import ConfigError, InvariantViolation, KineticError, LabError
from fronts.state import init_from_data, profile
from fronts.tracking import run_cauchy
from lab.sweep import compare_tables, matched_tw_alpha, inner_far_state, numerical_kinetic_function
from processing.export import export_table, header_lines, write_csv, write_text
from processing.pipeline import make_run_id
from riemann.solver import sample, solve_riemann
from schemes.integrate import integrate
from schemes.operators import GridState, SchemeConfig
from waves.kinetics import connection, kinetic_table
from waves.model import TwModel

COMMANDS = ("riemann", "cauchy", "tw", "fd", "kinetics", "validate")
INITS = ("riemann", "three-state", "sine")


def _floats(**kw):
    return field(metadata={"items": float}, **kw)


@dataclass(frozen=True)
class ExperimentConfig:
    command: str = "riemann"
    flux: str = "cubic"
    entropy: str = "quadratic"
    kinetic: str = "linear:0.75"
    alpha: float = 1.0
    p: float = 0.5
    beta: float = 1.0
    order: int = 3
    orders: Tuple[int, ...] = field(default=(2, 3, 4), metadata={"items": int})
    b_star: str = "mean"
    h: float = 0.02
    cfl: float = CFL_DEFAULT
    domain: Tuple[float, ...] = _floats(default=(-1.0, 3.0))
    boundary: str = "fixed"
    t_end: float = 0.5
    u_grid: Tuple[float, ...] = _floats(default=(1.5, 2.0, 2.5))
    init: str = "riemann"
    ul: float = 1.0
    um: float = 0.0
    ur: float = -0.5
    amplitude: float = 0.1
    n_cells: int = 2
    fan_step: float = 0.0
    samples: int = 401
    trajectories: bool = False
    targets: Tuple[str, ...] = field(default=("all",), metadata={"items": str})
    draws: int = 10000
    seed: int = 0
    output: str = OUTPUT_ROOT

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; known: {COMMANDS}")
        if self.init not in INITS:
            raise ConfigError(f"unknown initial data {self.init!r}; known: {INITS}")
        if len(self.domain) != 2 or not self.domain[1] > self.domain[0]:
            raise ConfigError(f"domain must be two increasing numbers, got {self.domain}")

    def emit(self):
        return "".join(f"{f.name} = {_format(getattr(self, f.name))}\n" for f in fields(self))

    @classmethod
    def parse(cls, text):
        values = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config line {number}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key] = value
        return cls.from_strings(values)

    @classmethod
    def from_strings(cls, values, base=None):
        known = {f.name: f for f in fields(cls)}
        typed = {}
        for key, value in values.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            typed[key] = _convert(known[key], value)
        return replace(base, **typed) if base is not None else cls(**typed)


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(_format(v) for v in value)
    return str(value)


def _scalar(kind, name, text):
    if kind is bool:
        if text.lower() in ("true", "1", "yes"):
            return True
        if text.lower() in ("false", "0", "no"):
            return False
        raise ConfigError(f"{name}: expected true/false, got {text!r}")
    try:
        return kind(text)
    except ValueError:
        raise ConfigError(f"{name}: cannot read {text!r} as {kind.__name__}") from None


def _convert(f, text):
    items = f.metadata.get("items")
    if items is None:
        return _scalar(type(f.default), f.name, text)
    if items is float and text.count(":") == 2:
        a, b, n = text.split(":")
        return tuple(float(v) for v in np.linspace(_scalar(float, f.name, a), _scalar(float, f.name, b),
                                                   _scalar(int, f.name, n)))
    return tuple(_scalar(items, f.name, part.strip()) for part in text.split(",") if part.strip())


def build_models(config):
    flux = get_flux(config.flux)
    pair = get_entropy(config.entropy, flux)
    return flux, pair, build_kinetic(config.kinetic, pair)


def build_kinetic(spec, pair):
    kind, _, arg = spec.partition(":")
    try:
        if kind == "linear":
            return linear_kinetic(pair, float(arg))
        if kind == "natural":
            return classical_kinetic(pair)
        if kind == "table":
            return tabulated_kinetic(read_table(arg), pair)
        if kind == "dispersive":
            return cubic_diffusive_dispersive_kinetic(pair, float(arg))
    except ValueError:
        raise ConfigError(f"bad kinetic spec {spec!r}") from None
    except KineticError as exc:
        raise ConfigError(f"kinetic spec {spec!r} is not admissible: {exc}") from exc
    raise ConfigError(f"unknown kinetic spec {spec!r}; use linear:<c>, natural, table:<file> or dispersive:<alpha>")


def _sampler(config):
    a, b = config.domain
    L = b - a
    if config.init == "riemann":
        mid = 0.5 * (a + b)
        return lambda x: config.ul if x < mid else config.ur
    if config.init == "three-state":
        return lambda x: config.ul if x < a + L / 3 else (config.um if x < a + 2 * L / 3 else config.ur)
    return lambda x: config.ul + config.amplitude * np.sin(2 * np.pi * (x - a) / L)


def run_riemann(config, header):
    flux, pair, kin = build_models(config)
    pattern = solve_riemann(flux, pair, kin, config.ul, config.ur).check(pair, kin)
    speeds = [s for w in pattern.waves for s in (w.speed_lo, w.speed_hi)] or [0.0]
    xi = np.linspace(min(speeds) - 1.0, max(speeds) + 1.0, config.samples)
    listing = pattern.describe()
    print(listing)
    write_text(config.output, "riemann_pattern.txt", listing.splitlines(), header)
    write_csv(config.output, "riemann_profile.csv", {"xi": xi, "u": sample(pattern, xi)}, header)


def run_fronts(config, header):
    flux, pair, kin = build_models(config)
    state = init_from_data(_sampler(config), config.domain, config.n_cells, config.fan_step, kin)
    result = run_cauchy(state, config.t_end)
    diag = result.diagnostics
    write_csv(config.output, "cauchy_diagnostics.csv", {
        "t": [d.time for d in diag], "V": [d.functionals.V for d in diag], "TV": [d.functionals.TV for d in diag],
        "mass": [d.functionals.mass for d in diag], "n_fronts": [d.n_fronts for d in diag],
        "interaction": [d.interaction for d in diag],
    }, header)
    fronts = result.state.fronts
    write_csv(config.output, "cauchy_fronts.csv", {
        "position": [f.position for f in fronts], "speed": [f.speed for f in fronts],
        "u_left": [f.u_left for f in fronts], "u_right": [f.u_right for f in fronts],
    }, header)
    x = np.linspace(*config.domain, config.samples)
    write_csv(config.output, "cauchy_profile.csv", {"x": x, "u": [profile(result.state, v) for v in x]}, header)
    logger.info(f"cauchy: {result.interactions} interactions, L1-Lipschitz rate {result.lipschitz_rate:.6g}, "
                f"TV bound {result.tv_bound:.6g}, sup bound {result.sup_bound:.6g}")


def run_tw(config, header):
    flux, pair, _ = build_models(config)
    model = TwModel(flux, config.alpha, config.p)
    table = kinetic_table(model, config.u_grid, pair)
    export_table(config.output, "tw_kinetic.txt", table, header)
    if config.trajectories:
        for i, u in enumerate(config.u_grid):
            _, traj = connection(model, u)
            if traj is not None:
                write_csv(config.output, f"tw_trajectory_{i}.csv", {"y": traj.y, "w": traj.w, "dw": traj.dw}, header)


def scheme_config(config, pair):
    return SchemeConfig(pair=pair, order=config.order, alpha=config.alpha, beta=config.beta, h=config.h,
                        cfl=config.cfl, domain=tuple(config.domain), boundary=config.boundary,
                        b_star=config.b_star)


def run_fd(config, header):
    flux, pair, _ = build_models(config)
    cfg = scheme_config(config, pair)
    cells = np.array([_sampler(config)(x) for x in cfg.x], dtype=float)
    state, diagnostics = integrate(cfg, GridState(0.0, cells), config.t_end)
    write_csv(config.output, "fd_profile.csv", {"x": cfg.x, "u": state.cells}, header)
    write_csv(config.output, "fd_diagnostics.csv", {"t": diagnostics.t, "mass": diagnostics.mass,
                                                    "entropy": diagnostics.entropy, "dt": diagnostics.dt}, header)


def run_kinetics(config, header):
    flux, pair, _ = build_models(config)
    template = scheme_config(config, pair)
    tw_model = TwModel(flux, matched_tw_alpha(config.beta, config.alpha), 0.0)
    reference = kinetic_table(tw_model, config.u_grid, pair)
    export_table(config.output, "kinetics_tw.txt", reference, header)
    rule = inner_far_state(tabulated_kinetic(reference, pair))
    columns = {"u_minus": reference.u_minus(), "u_plus_tw": reference.u_plus()}
    report = []
    for order in config.orders:
        table = numerical_kinetic_function(replace(template, order=int(order)), config.u_grid, rule, config.t_end)
        export_table(config.output, f"kinetics_fd_order{order}.txt", table, header)
        columns[f"u_plus_order{order}"] = np.interp(reference.u_minus(), table.u_minus(), table.u_plus(),
                                                    left=np.nan, right=np.nan)
        report += [f"[order {order}]"] + compare_tables(table, reference).lines()
    write_text(config.output, "kinetics_report.txt", report, header)
    write_csv(config.output, "kinetics_plot.csv", columns, header)
    print("\n".join(report))


def run_validate(config, header):
    from validation import run_targets

    results = run_targets(config)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in results]
    print("\n".join(lines))
    write_text(config.output, "validate_report.txt", lines, header)
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        raise InvariantViolation(f"failed targets: {', '.join(failed)}")


RUNNERS = {
    "riemann": run_riemann,
    "cauchy": run_fronts,
    "tw": run_tw,
    "fd": run_fd,
    "kinetics": run_kinetics,
    "validate": run_validate,
}


def run(config):
    """Execute one experiment; returns the process exit status."""
    os.makedirs(config.output, exist_ok=True)
    sink = logger.add(os.path.join(config.output, "kinlab.log"), level="DEBUG")
    text = config.emit()
    run_id = make_run_id(text)
    logger.info(f"run {run_id}: {config.command}")
    try:
        RUNNERS[config.command](config, header_lines(text, run_id))
        return 0
    except LabError as exc:
        logger.error(f"run {run_id} failed: {exc}")
        return exc.exit_code
    finally:
        logger.remove(sink)


def build_parser():
    parser = argparse.ArgumentParser(prog="kinlab", description="Kinetic-relation laboratory")
    commands = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = commands.add_parser(name)
        sub.add_argument("--config", default=None, help="flat key = value experiment file")
        for f in fields(ExperimentConfig):
            if f.name == "command":
                continue
            flags = [f"--{f.name.replace('_', '-')}"]
            if "_" in f.name:
                flags.append(f"--{f.name.replace('_', '')}")
            sub.add_argument(*flags, dest=f.name, default=argparse.SUPPRESS, metavar="VALUE")
    return parser


def load_config(argv=None):
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    path = args.pop("config", None)
    base = ExperimentConfig(command=command)
    if path is not None:
        try:
            with open(path) as fh:
                base = replace(ExperimentConfig.parse(fh.read()), command=command)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return ExperimentConfig.from_strings(args, base=base)


def main(argv=None):
    try:
        config = load_config(argv)
    except ConfigError as exc:
        logger.error(str(exc))
        return exc.exit_code
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
