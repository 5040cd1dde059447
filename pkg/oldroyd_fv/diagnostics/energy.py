"""
Energy budget of a run.

The continuum budget is

    E(t) + int_0^t int S:grad u = E(0) + int_0^t int rho f.u
                                  + (1/2 lambda) int_0^t int (tau log tau + tau)

with E = int (rho |u|^2 / 2 + H). DiagnosticsRecorder samples the integrands
at every recorded state and integrates them in time; the residual of the
budget is stored with each record.
"""

import logging
from dataclasses import astuple, dataclass, fields
from typing import List, Optional, Sequence

import numpy as np
from scipy import integrate

from ..errors import ParameterError
from ..grid import State, integral, velocity_from_momentum
from ..model import ModelParams, helmholtz, xlogx
from ..solver import MomentumConfig, dissipation_density, forcing_field

logger = logging.getLogger(__name__)

SIMPSON = "simpson"
TRAPEZOID = "trapezoid"


@dataclass(frozen=True)
class DiagnosticsRecord:
    time: float
    kinetic: float
    free_energy: float
    dissipation_cum: float
    source_cum: float
    work_cum: float
    mass_rho: float
    mass_eta: float
    mass_tau: float
    domination_margin: float
    energy_residual: float

    def as_row(self) -> tuple:
        return astuple(self)


RECORD_FIELDS = tuple(f.name for f in fields(DiagnosticsRecord))


# ── instantaneous functionals ──────────────────────────────────────────────

def kinetic_energy(s: State) -> float:
    u = velocity_from_momentum(s)
    return integral(0.5 * np.sum(s.mom * u, axis=0), s.grid)


def free_energy(s: State, p: ModelParams) -> float:
    return integral(helmholtz(s.thermo(), p), s.grid)


def total_energy(s: State, p: ModelParams) -> float:
    return kinetic_energy(s) + free_energy(s, p)


def domination_margin(s: State, p: ModelParams) -> float:
    return float(min(np.min(p.c_bar * s.eta - s.rho), np.min(p.c_bar * s.eta - s.tau)))


def source_rate(s: State, p: ModelParams) -> float:
    return integral(xlogx(s.tau) + s.tau, s.grid) / (2.0 * p.lam)


def dissipation_rate(s: State, p: ModelParams) -> float:
    return integral(dissipation_density(velocity_from_momentum(s), s.grid, p), s.grid)


def work_rate(s: State, mc: MomentumConfig) -> float:
    u = velocity_from_momentum(s)
    f = forcing_field(mc, s.grid)
    return integral(s.rho * np.sum(f * u, axis=0), s.grid)


# ── time integration ───────────────────────────────────────────────────────

def cumulative_integral(values: Sequence[float], times: Sequence[float],
                        method: str = SIMPSON) -> np.ndarray:
    """Running integral of sampled values; composite Simpson on every prefix by default."""
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    if method == TRAPEZOID:
        return integrate.cumulative_trapezoid(values, times, initial=0.0)
    if method != SIMPSON:
        raise ParameterError(f"unknown quadrature '{method}'")

    out = np.zeros(len(values))
    for k in range(1, len(values)):
        if k == 1:
            out[k] = integrate.trapezoid(values[:2], times[:2])
        else:
            out[k] = integrate.simpson(values[:k + 1], x=times[:k + 1])
    return out


def residual_series(history: Sequence[DiagnosticsRecord]) -> np.ndarray:
    if not history:
        return np.zeros(0)
    e0 = history[0].kinetic + history[0].free_energy
    return np.array([
        r.kinetic + r.free_energy + r.dissipation_cum - e0 - r.work_cum - r.source_cum
        for r in history
    ])


def energy_residual(history: Sequence[DiagnosticsRecord], magnitude: bool = False) -> float:
    """
    max_t R(t). The continuum budget demands R <= 0; with magnitude=True the
    largest |R(t)| is returned instead, which is what refinement studies track.
    """
    series = residual_series(history)
    if series.size == 0:
        return 0.0
    return float(np.max(np.abs(series)) if magnitude else np.max(series))


class DiagnosticsRecorder:
    """Collects integrand samples state by state and turns them into records."""

    def __init__(self, params: ModelParams, momentum: Optional[MomentumConfig] = None,
                 quadrature: str = SIMPSON):
        self.params = params
        self.momentum = momentum or MomentumConfig()
        self.quadrature = quadrature
        self._samples: List[tuple] = []

    def __len__(self) -> int:
        return len(self._samples)

    def record(self, s: State):
        p = self.params
        self._samples.append((
            float(s.time),
            kinetic_energy(s),
            free_energy(s, p),
            dissipation_rate(s, p),
            source_rate(s, p),
            work_rate(s, self.momentum),
            integral(s.rho, s.grid),
            integral(s.eta, s.grid),
            integral(s.tau, s.grid),
            domination_margin(s, p),
        ))

    def history(self) -> List[DiagnosticsRecord]:
        if not self._samples:
            return []
        data = np.array(self._samples)
        times = data[:, 0]
        dissipation = cumulative_integral(data[:, 3], times, self.quadrature)
        source = cumulative_integral(data[:, 4], times, self.quadrature)
        work = cumulative_integral(data[:, 5], times, self.quadrature)

        e0 = data[0, 1] + data[0, 2]
        records = []
        for k, row in enumerate(data):
            residual = row[1] + row[2] + dissipation[k] - e0 - work[k] - source[k]
            records.append(DiagnosticsRecord(
                time=float(times[k]), kinetic=float(row[1]), free_energy=float(row[2]),
                dissipation_cum=float(dissipation[k]), source_cum=float(source[k]),
                work_cum=float(work[k]), mass_rho=float(row[6]), mass_eta=float(row[7]),
                mass_tau=float(row[8]), domination_margin=float(row[9]),
                energy_residual=float(residual),
            ))
        return records
