# Pointwise a priori bounds along characteristics, evaluated on field histories

import csv
import io
import logging
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from ..grid import State
from ..model import ModelParams
from .characteristics import VelocityHistory

logger = logging.getLogger(__name__)

BOUNDS_COLUMNS = ("t", "bound_kind", "lhs", "rhs", "slack")
DIV_NORM_NOTE = "div norm: max over cell centres of the central discrete divergence"


@dataclass(frozen=True)
class BoundRow:
    t: float
    bound_kind: str
    lhs: float
    rhs: float
    slack: float


@dataclass
class BoundsReport:
    rows: List[BoundRow] = field(default_factory=list)
    note: str = DIV_NORM_NOTE

    @property
    def worst_slack(self) -> float:
        return min((row.slack for row in self.rows), default=np.inf)

    def worst(self) -> BoundRow:
        return min(self.rows, key=lambda row: row.slack)

    def by_kind(self, kind: str) -> List[BoundRow]:
        return [row for row in self.rows if row.bound_kind == kind]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        buffer.write(f"# {self.note}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(BOUNDS_COLUMNS)
        for row in self.rows:
            writer.writerow([repr(row.t), row.bound_kind, repr(row.lhs), repr(row.rhs), repr(row.slack)])
        return buffer.getvalue()


def _lower(value0: float, growth: float) -> float:
    # a non-negative infimum shrinks at most by exp(-D); a negative one grows by exp(D)
    return value0 * np.exp(-growth) if value0 >= 0 else value0 * np.exp(growth)


def bounds_report(history: Sequence[State], vh: VelocityHistory, p: ModelParams) -> BoundsReport:
    """
    Both sides of the characteristic bounds for every state in history.

    With D(t) = int_0^t |div u|_inf and d = t / (2 lambda):
      inf f0 e^{-D} <= f <= sup f0 e^{D}           for rho, eta
      inf tau0 e^{-D-d} <= tau <= sup tau0 e^{D-d}
      c_bar eta - rho >= inf xi0 e^{-D}
      c_bar eta - tau >= inf zeta0 e^{-D} + d inf tau0 e^{-2D-d}
    Lower rows report slack = lhs - rhs, upper rows rhs - lhs.
    """
    report = BoundsReport()
    if not history:
        return report
    first = history[0]
    t0 = vh.t_start
    xi0 = float(np.min(p.c_bar * first.eta - first.rho))
    zeta0 = float(np.min(p.c_bar * first.eta - first.tau))
    tau_inf = float(np.min(first.tau))

    def add_lower(t, kind, lhs, rhs):
        report.rows.append(BoundRow(t, kind, float(lhs), float(rhs), float(lhs - rhs)))

    def add_upper(t, kind, lhs, rhs):
        report.rows.append(BoundRow(t, kind, float(lhs), float(rhs), float(rhs - lhs)))

    for s in history:
        t = float(s.time)
        D = vh.divergence_integral(t)
        decay = (t - t0) / (2.0 * p.lam)
        for name in ("rho", "eta"):
            f0, f = getattr(first, name), getattr(s, name)
            add_lower(t, f"{name}_lower", np.min(f), np.min(f0) * np.exp(-D))
            add_upper(t, f"{name}_upper", np.max(f), np.max(f0) * np.exp(D))
        add_lower(t, "tau_lower", np.min(s.tau), tau_inf * np.exp(-D - decay))
        add_upper(t, "tau_upper", np.max(s.tau), np.max(first.tau) * np.exp(D - decay))
        add_lower(t, "xi_lower", np.min(p.c_bar * s.eta - s.rho), _lower(xi0, D))
        add_lower(t, "zeta_lower", np.min(p.c_bar * s.eta - s.tau),
                  _lower(zeta0, D) + decay * tau_inf * np.exp(-2.0 * D - decay))

    logger.info("bounds report: %d rows, worst slack %.3e", len(report.rows), report.worst_slack)
    if report.worst_slack < 0:
        worst = report.worst()
        logger.warning("bound %s violated at t=%.4g by %.3e", worst.bound_kind, worst.t, -worst.slack)
    return report
