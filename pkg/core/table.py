"""Kinetic tables and their text format.

    # kinetic-table v1 flux=<name> key=value ...
    <u_minus>\t<u_plus>
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import KINETIC_TOL
from core.kinetic import tangent, zero_dissipation
from errors import ConfigError, KineticError

HEADER = "# kinetic-table v1"


@dataclass
class KineticTable:
    rows: List[Tuple[float, float]]
    flux_name: str
    slope_at_zero: Optional[float] = None
    metadata: Dict[str, str] = field(default_factory=dict)

    def u_minus(self):
        return np.array([r[0] for r in self.rows])

    def u_plus(self):
        return np.array([r[1] for r in self.rows])


def validate_rows(rows, pair):
    """Sort rows by u_minus and check monotonicity and pinching on each side of 0."""
    rows = sorted((float(a), float(b)) for a, b in rows)
    if any(a == 0 for a, _ in rows):
        raise KineticError("kinetic table contains a row at u_minus = 0")
    u = np.array([r[0] for r in rows])
    v = np.array([r[1] for r in rows])
    if np.any(np.diff(u) <= 0):
        raise KineticError("kinetic table has repeated u_minus values")
    if np.any(np.diff(v) >= 0):
        raise KineticError("kinetic table is not strictly decreasing", {"rows": rows})
    for a, b in rows:
        s = np.sign(a)
        nat = tangent(pair.flux, a)
        zero = zero_dissipation(pair, a)
        if s * (b - zero) <= 0 or s * (b - nat) > KINETIC_TOL * max(1.0, abs(a)):
            raise KineticError("kinetic table row is not pinched", {"u_minus": a, "u_plus": b,
                                                                     "natural": nat, "zero_dissipation": zero})
    return rows


def format_table(table):
    meta = {"flux": table.flux_name}
    if table.slope_at_zero is not None:
        meta["slope_at_zero"] = f"{table.slope_at_zero:.17g}"
    meta.update({k: str(v) for k, v in table.metadata.items()})
    head = " ".join([HEADER] + [f"{k}={v}" for k, v in meta.items()])
    lines = [head] + ["%.17g\t%.17g" % (a, b) for a, b in table.rows]
    return "\n".join(lines) + "\n"


def parse_table(text):
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith(HEADER):
        raise ConfigError("not a kinetic table: missing 'kinetic-table v1' header")
    meta = {}
    for token in lines[0][len(HEADER):].split():
        if "=" not in token:
            raise ConfigError(f"malformed kinetic table header token {token!r}")
        key, value = token.split("=", 1)
        meta[key] = value
    if "flux" not in meta:
        raise ConfigError("kinetic table header has no flux")
    rows = []
    for number, line in enumerate(lines[1:], start=2):
        if line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ConfigError(f"kinetic table line {number}: expected two tab-separated numbers")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ConfigError(f"kinetic table line {number}: not a number") from None
    flux_name = meta.pop("flux")
    slope = meta.pop("slope_at_zero", None)
    return KineticTable(rows=rows, flux_name=flux_name,
                        slope_at_zero=float(slope) if slope is not None else None, metadata=meta)


def write_table(table, path):
    with open(path, "w") as fh:
        fh.write(format_table(table))
    return path


def read_table(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read kinetic table {path}: {exc}") from exc
    return parse_table(text)
