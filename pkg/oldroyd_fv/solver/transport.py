"""
Conservative transport of rho, eta and tau.

All three densities go through one donor-cell flux built from the same face
velocities, so any linear combination of them (in particular the domination
margins c_bar*eta - rho and c_bar*eta - tau) obeys the same monotone update.
The tau source is integrated exactly and coupled by Lie or Strang splitting.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import ParameterError, StepSizeError
from ..grid import Grid, State, face_velocities, flux_divergence, outflow_number
from ..model import ModelParams

logger = logging.getLogger(__name__)

LIE = "lie"
STRANG = "strang"
DAMPED = "damped"
FULL = "full"

# slack on the monotonicity bound for roundoff in dt
_OUTFLOW_SLACK = 1e-12


@dataclass(frozen=True)
class TransportConfig:
    cfl: float = 0.4
    splitting: str = STRANG
    dt_max: float = 1.0
    source_cfl: float = 0.5

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ParameterError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.splitting not in (LIE, STRANG):
            raise ParameterError(f"splitting must be '{LIE}' or '{STRANG}', got '{self.splitting}'")
        if self.dt_max <= 0 or self.source_cfl <= 0:
            raise ParameterError("dt_max and source_cfl must be positive")


Faces = Tuple[np.ndarray, Optional[np.ndarray]]


def _check_outflow(faces: Faces, dt: float, g: Grid):
    number = outflow_number(faces, dt, g)
    if number > 1.0 + _OUTFLOW_SLACK:
        raise StepSizeError(f"dt={dt:.4g} moves {number:.3f} of a cell per step (limit 1)")


def upwind_step(f: np.ndarray, u: np.ndarray, dt: float, g: Grid,
                faces: Optional[Faces] = None) -> np.ndarray:
    """One donor-cell step of df/dt + div(f u) = 0."""
    if faces is None:
        faces = face_velocities(u, g)
    _check_outflow(faces, dt, g)
    return f - dt * flux_divergence(f, faces, g)


def damping_step(tau: np.ndarray, dt: float, p: ModelParams) -> np.ndarray:
    if dt < 0:
        raise StepSizeError(f"negative damping step {dt}")
    return tau * np.exp(-dt / (2.0 * p.lam))


def full_tau_source_step(tau: np.ndarray, eta: np.ndarray, dt: float, p: ModelParams) -> np.ndarray:
    """Exact solution of dtau/dt = (k eta - tau) / (2 lambda) with eta frozen."""
    if dt < 0:
        raise StepSizeError(f"negative source step {dt}")
    equilibrium = p.k * eta
    return equilibrium + (tau - equilibrium) * np.exp(-dt / (2.0 * p.lam))


def cfl_dt(u: np.ndarray, g: Grid, c: TransportConfig) -> float:
    limits = [c.dt_max]
    for component, h in zip(u, g.spacings):
        speed = float(np.max(np.abs(component)))
        if speed > 0:
            limits.append(c.cfl * h / speed)
    return min(limits)


def _relax(tau: np.ndarray, eta: np.ndarray, dt: float, p: ModelParams, tau_source: str) -> np.ndarray:
    if tau_source == DAMPED:
        return damping_step(tau, dt, p)
    return full_tau_source_step(tau, eta, dt, p)


def transport_substep(s: State, u: np.ndarray, dt: float, g: Grid, c: TransportConfig,
                      p: ModelParams, tau_source: str = DAMPED) -> State:
    """
    Advance the densities by dt with velocity u. Momentum is left untouched.

    tau_source selects the damped stress equation (default) or the full
    source (k eta - tau)/(2 lambda) used before the reduction.
    """
    if tau_source not in (DAMPED, FULL):
        raise ParameterError(f"unknown tau source '{tau_source}'")
    faces = face_velocities(u, g)
    _check_outflow(faces, dt, g)

    tau = s.tau
    if c.splitting == STRANG:
        tau = _relax(tau, s.eta, 0.5 * dt, p, tau_source)
    rho = s.rho - dt * flux_divergence(s.rho, faces, g)
    eta = s.eta - dt * flux_divergence(s.eta, faces, g)
    tau = tau - dt * flux_divergence(tau, faces, g)
    if c.splitting == STRANG:
        tau = _relax(tau, eta, 0.5 * dt, p, tau_source)
    else:
        tau = _relax(tau, eta, dt, p, tau_source)

    return s.replace(rho=rho, eta=eta, tau=tau, time=s.time + dt)
