import os

import numpy as np

from config import ARTIFACT_VERSION
from core.table import format_table


def header_lines(config_text, run_id):
    lines = [f"kinlab artifact v{ARTIFACT_VERSION} run={run_id}"]
    lines += [line for line in config_text.splitlines() if line.strip()]
    return lines


def write_csv(directory, name, columns, header):
    """Write named columns with '#' header lines and full double precision."""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    names = list(columns)
    data = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
    np.savetxt(path, data, fmt="%.17g", delimiter=",",
               header="\n".join(header + [",".join(names)]), comments="# ")
    return path


def write_text(directory, name, lines, header=()):
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    with open(path, "w") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        for line in lines:
            fh.write(f"{line}\n")
    return path


def export_table(directory, name, table, header=()):
    """Kinetic table file with the run header as comments below the format line."""
    lines = format_table(table).splitlines()
    return write_text(directory, name, lines[:1] + [f"# {line}" for line in header] + lines[1:])

