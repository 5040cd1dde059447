"""
Plain-text output of a run.

snapshot_<step>.txt   one block per field: a header line
                      "nx ny dx dy time name" followed by ny rows of nx
                      values, all printed with %.17g so they read back exactly
diagnostics.csv       one row per DiagnosticsRecord, columns in field order
bounds.csv            characteristic bound rows (see oracle.bounds)
verdict.json          scenario, claim, pass flag, measurements and checks
"""

import csv
import json
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from ..diagnostics import RECORD_FIELDS, DiagnosticsRecord
from ..errors import IntegrityError
from ..grid import Grid, State
from ..oracle import BoundsReport
from ..scenarios import Verdict

logger = logging.getLogger(__name__)

VALUE_FORMAT = "%.17g"
HEADER_FIELDS = ("nx", "ny", "dx", "dy", "time", "name")


@dataclass
class SnapshotBlock:
    nx: int
    ny: int
    dx: float
    dy: float
    time: float
    name: str
    values: np.ndarray


def snapshot_name(step: int) -> str:
    return f"snapshot_{step:06d}.txt"


def write_snapshot(s: State, path: str):
    g = s.grid
    with open(path, "w", encoding="utf-8") as f:
        for name, values in s.fields().items():
            header = f"{g.nx} {g.ny} {VALUE_FORMAT % g.dx} {VALUE_FORMAT % g.dy} {VALUE_FORMAT % s.time} {name}"
            np.savetxt(f, values, fmt=VALUE_FORMAT, header=header, comments="")


def read_snapshot(path: str) -> Dict[str, SnapshotBlock]:
    with open(path, "r", encoding="utf-8") as f:
        lines = [line for line in f.read().splitlines() if line.strip()]

    blocks: Dict[str, SnapshotBlock] = {}
    i = 0
    while i < len(lines):
        tokens = lines[i].split()
        if len(tokens) != len(HEADER_FIELDS):
            raise IntegrityError(f"{path}: bad block header {lines[i]!r}")
        nx, ny = int(tokens[0]), int(tokens[1])
        rows = lines[i + 1:i + 1 + ny]
        if len(rows) != ny:
            raise IntegrityError(f"{path}: block '{tokens[5]}' is truncated")
        values = np.array([[float(v) for v in row.split()] for row in rows])
        if values.shape != (ny, nx):
            raise IntegrityError(f"{path}: block '{tokens[5]}' has shape {values.shape}, header says {(ny, nx)}")
        blocks[tokens[5]] = SnapshotBlock(nx, ny, float(tokens[2]), float(tokens[3]),
                                          float(tokens[4]), tokens[5], values)
        i += 1 + ny
    return blocks


def snapshot_to_state(blocks: Dict[str, SnapshotBlock], grid: Grid) -> State:
    try:
        mom = np.stack([blocks[f"mom_{axis}"].values for axis in "xy"[:grid.dim]])
        return State(grid, blocks["rho"].values, blocks["eta"].values, blocks["tau"].values,
                     mom, blocks["rho"].time)
    except KeyError as e:
        raise IntegrityError(f"snapshot lacks field {e}")


def write_diagnostics(history: Sequence[DiagnosticsRecord], path: str, every: int = 1):
    """CSV of the records; every k-th record plus the last one."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(RECORD_FIELDS)
        for k, record in enumerate(history):
            if k % every == 0 or k == len(history) - 1:
                writer.writerow([repr(float(v)) for v in record.as_row()])


def read_diagnostics(path: str) -> List[Dict[str, float]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return [{key: float(value) for key, value in row.items()} for row in csv.DictReader(f)]


def write_bounds(report: BoundsReport, path: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(report.to_csv())


def _plain(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def write_verdict(verdict: Verdict, path: str):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(verdict.to_dict(), f, indent=2, ensure_ascii=False, default=_plain)


class SnapshotWriter:
    """Run observer that writes a snapshot every `every` steps (0 disables)."""

    def __init__(self, out_dir: str, every: int):
        self.out_dir = out_dir
        self.every = every
        self.written: List[str] = []

    def __call__(self, step: int, s: State):
        if self.every <= 0 or step % self.every != 0:
            return
        path = os.path.join(self.out_dir, snapshot_name(step))
        write_snapshot(s, path)
        self.written.append(path)
        logger.debug("wrote %s", path)
