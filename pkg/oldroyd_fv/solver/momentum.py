"""
Explicit momentum update.

    m <- m + dt * [ -div(m (x) u)_upwind - grad h + div S(grad u) + rho f ]

Convection reuses the donor-cell flux of the transport module; the total
pressure h = q(eta) + p(rho) - tau is differentiated centrally.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from ..errors import DivergenceError, ParameterError, StepSizeError
from ..grid import (
    VELOCITY,
    Grid,
    State,
    divergence,
    face_velocities,
    flux_divergence,
    gradient,
    laplacian,
    outflow_number,
    velocity_from_momentum,
    velocity_gradient,
)
from ..model import ModelParams, stress_contraction, total_pressure
from .transport import TransportConfig, cfl_dt

logger = logging.getLogger(__name__)

ZERO = "zero"
GRAVITY = "gravity"
MANUFACTURED = "manufactured"
FORCINGS = (ZERO, GRAVITY, MANUFACTURED)

_STEP_SLACK = 1e-12


@dataclass(frozen=True)
class MomentumConfig:
    visc_cfl: float = 0.25
    forcing: str = ZERO
    gravity: float = 1.0
    # body force per unit mass for the manufactured preset, shape (dim, ny, nx)
    forcing_field: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not 0 < self.visc_cfl <= 0.5:
            raise ParameterError(f"visc_cfl must lie in (0, 0.5], got {self.visc_cfl}")
        if self.forcing not in FORCINGS:
            raise ParameterError(f"unknown forcing '{self.forcing}', expected one of {FORCINGS}")
        if self.forcing == MANUFACTURED and self.forcing_field is None:
            raise ParameterError("manufactured forcing needs a forcing_field")


def forcing_field(mc: MomentumConfig, g: Grid) -> np.ndarray:
    """Body force f per unit mass on the grid."""
    if mc.forcing == GRAVITY:
        f = g.zeros_vector()
        f[-1] = -mc.gravity
        return f
    if mc.forcing == MANUFACTURED:
        return np.asarray(mc.forcing_field, dtype=float)
    return g.zeros_vector()


def balance_forcing(s: State, p: ModelParams) -> np.ndarray:
    """f = grad h / rho, the force that holds s in hydrostatic balance."""
    h = total_pressure(s.thermo(), p)
    return gradient(h, s.grid) / s.rho


def viscous_force(u: np.ndarray, g: Grid, p: ModelParams) -> np.ndarray:
    """
    div S(grad u) for constant coefficients:
    mu_s/2 lap u + (mu_s (1/2 - 1/d) + mu_b) grad div u.
    In 1D this is mu_b u_xx.
    """
    if g.dim == 1:
        return p.mu_b * laplacian(u[0], g, VELOCITY)[None]
    lap = np.stack([laplacian(component, g, VELOCITY) for component in u])
    grad_div = gradient(divergence(u, g), g)
    return 0.5 * p.mu_s * lap + (p.mu_s * (0.5 - 1.0 / g.dim) + p.mu_b) * grad_div


def dissipation_density(u: np.ndarray, g: Grid, p: ModelParams) -> np.ndarray:
    """Pointwise S(grad u) : grad u."""
    return stress_contraction(velocity_gradient(u, g), p)


# ── time step limits ───────────────────────────────────────────────────────

def viscous_dt(s: State, g: Grid, p: ModelParams, mc: MomentumConfig) -> float:
    rho_min = float(np.min(s.rho))
    return mc.visc_cfl * min(g.spacings) ** 2 * rho_min / (p.mu_s + p.mu_b)


def sound_speed(s: State, p: ModelParams) -> np.ndarray:
    """Linearised wave speed c^2 = (rho h_rho + eta h_eta + tau h_tau) / rho, clipped at 0."""
    stiffness = (p.a * p.gamma * s.rho ** p.gamma + 2.0 * p.z * s.eta ** 2
                 + p.polymer_slope * s.eta - s.tau)
    c2 = np.where(s.rho > 0, stiffness / np.maximum(s.rho, 1e-300), 0.0)
    return np.sqrt(np.maximum(c2, 0.0))


def stable_dt_limits(s: State, g: Grid, p: ModelParams, mc: MomentumConfig,
                     tc: TransportConfig = TransportConfig()) -> Dict[str, float]:
    u = velocity_from_momentum(s)
    speed = float(np.max(np.sqrt(np.sum(u ** 2, axis=0)) + sound_speed(s, p)))
    limits = {
        "advective": cfl_dt(u, g, tc),
        "viscous": viscous_dt(s, g, p, mc),
        "source": tc.source_cfl * 2.0 * p.lam,
        "max": tc.dt_max,
    }
    if speed > 0:
        limits["acoustic"] = tc.cfl * min(g.spacings) / speed
    return limits


def stable_dt(s: State, g: Grid, p: ModelParams, mc: MomentumConfig,
              tc: TransportConfig = TransportConfig()) -> float:
    limits = stable_dt_limits(s, g, p, mc, tc)
    name = min(limits, key=limits.get)
    logger.debug("stable dt %.4g set by %s limit", limits[name], name)
    return limits[name]


# ── update ─────────────────────────────────────────────────────────────────

def _finite(name: str, value: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(value)):
        raise DivergenceError(name, f"{np.count_nonzero(~np.isfinite(value))} cells")
    return value


def momentum_step(s: State, dt: float, g: Grid, p: ModelParams, mc: MomentumConfig) -> np.ndarray:
    """Return the momentum after one explicit step of length dt."""
    u = velocity_from_momentum(s)
    faces = face_velocities(u, g)
    if outflow_number(faces, dt, g) > 1.0 + _STEP_SLACK:
        raise StepSizeError(f"dt={dt:.4g} violates the advective limit")
    limit = viscous_dt(s, g, p, mc)
    if dt > limit * (1.0 + _STEP_SLACK):
        raise StepSizeError(f"dt={dt:.4g} exceeds the viscous limit {limit:.4g}")

    h = total_pressure(s.thermo(), p)
    terms = {
        "convection": -np.stack([flux_divergence(m, faces, g, VELOCITY) for m in s.mom]),
        "pressure gradient": -gradient(h, g),
        "viscous stress": viscous_force(u, g, p),
        "body force": s.rho * forcing_field(mc, g),
    }
    rate = np.zeros_like(s.mom)
    for name, term in terms.items():
        rate = rate + _finite(name, term)
    return _finite("momentum update", s.mom + dt * rate)
