# Evolved state and field reductions

import dataclasses
from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..errors import DomainError, IntegrityError
from ..model import ThermoSample
from .mesh import Grid

RHO_FLOOR = 1e-12
SCALAR_FIELDS = ("rho", "eta", "tau")


@dataclass
class State:
    """Densities rho, eta, tau and momentum m = rho u at one time level."""

    grid: Grid
    rho: np.ndarray
    eta: np.ndarray
    tau: np.ndarray
    mom: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        for name in SCALAR_FIELDS:
            value = np.asarray(getattr(self, name), dtype=float)
            if value.shape != self.grid.shape:
                raise IntegrityError(f"{name} has shape {value.shape}, grid is {self.grid.shape}")
            setattr(self, name, value)
        self.mom = np.asarray(self.mom, dtype=float)
        if self.mom.shape != self.grid.vector_shape:
            raise IntegrityError(f"mom has shape {self.mom.shape}, expected {self.grid.vector_shape}")

    @classmethod
    def at_rest(cls, grid: Grid, rho, eta, tau, time: float = 0.0) -> "State":
        return cls(grid, rho, eta, tau, grid.zeros_vector(), time)

    def thermo(self) -> ThermoSample:
        return ThermoSample(eta=self.eta, rho=self.rho, tau=self.tau)

    def replace(self, **changes) -> "State":
        return dataclasses.replace(self, **changes)

    def copy(self) -> "State":
        return State(self.grid, self.rho.copy(), self.eta.copy(), self.tau.copy(),
                     self.mom.copy(), self.time)

    def fields(self) -> Dict[str, np.ndarray]:
        out = {name: getattr(self, name) for name in SCALAR_FIELDS}
        for i, axis in enumerate("xy"[:self.grid.dim]):
            out[f"mom_{axis}"] = self.mom[i]
        return out

    def validate(self, rho_floor: float = RHO_FLOOR):
        """Raise unless fields are finite, non-negative and vacuum-consistent."""
        for name, value in self.fields().items():
            if not np.all(np.isfinite(value)):
                raise IntegrityError(f"{name} has non-finite values at t={self.time:g}")
        for name in SCALAR_FIELDS:
            value = getattr(self, name)
            if np.any(value < 0):
                raise DomainError(f"{name} is negative (min {value.min():.3e}) at t={self.time:g}")
        velocity_from_momentum(self, rho_floor)
        return self


def velocity_from_momentum(s: State, rho_floor: float = RHO_FLOOR) -> np.ndarray:
    """u = m / max(rho, rho_floor); momentum in vacuum cells is an integrity error."""
    vacuum = s.rho <= rho_floor
    if np.any(s.mom[:, vacuum] != 0.0):
        raise IntegrityError("non-zero momentum in vacuum cells")
    return s.mom / np.maximum(s.rho, rho_floor)


def integral(f: np.ndarray, g: Grid) -> float:
    # numpy's pairwise summation keeps the reduction order fixed
    return float(np.sum(f) * g.cell_volume)
