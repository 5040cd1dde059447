"""
Discrete residuals of the renormalized and weak formulations.

For a density zeta solving d_t zeta + div(zeta u) = -[zeta = tau] zeta/(2 lambda)
and a ratio solving d_t s + u.grad s = -[s = s_tau] s/(2 lambda), integrating
against the constant test function gives

    int b(zeta)(t) - int b(zeta)(0) + int_0^t int (b'(zeta) zeta - b(zeta)) div u
        + [zeta = tau] int_0^t int b'(tau) tau / (2 lambda) = 0
    int b(s)(t) - int b(s)(0) - int_0^t int b(s) div u
        + [s = s_tau] int_0^t int b'(s) s / (2 lambda) = 0

Histories are sequences of States; velocities are either a sequence aligned
with the states or a VelocityHistory.
"""

import logging
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from ..errors import IntegrityError, ParameterError
from ..grid import State, divergence, gradient, integral
from ..model import ModelParams, ratios, xlogx
from ..oracle import VelocityHistory
from .energy import SIMPSON, cumulative_integral

logger = logging.getLogger(__name__)

SQUARE = "square"
XLOGX = "xlogx"
B_KINDS = (SQUARE, XLOGX)
DENSITY_FIELDS = ("rho", "eta", "tau")
RATIO_FIELDS = ("s_rho", "s_tau")
RENORM_FIELDS = DENSITY_FIELDS + RATIO_FIELDS
DAMPED_FIELDS = ("tau", "s_tau")

Velocities = Union[Sequence[np.ndarray], VelocityHistory]


def _renormalize(b_kind: str, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(b(z), b'(z) z)."""
    if b_kind == SQUARE:
        return z ** 2, 2.0 * z ** 2
    # b'(z) z = z log z + z, with 0 log 0 = 0
    b = xlogx(z)
    return b, b + z


def field_values(s: State, name: str) -> np.ndarray:
    if name in DENSITY_FIELDS:
        return getattr(s, name)
    s_rho, s_tau = ratios(s.thermo())
    return np.asarray(s_rho if name == "s_rho" else s_tau)


def _velocity_list(history: Sequence[State], velocities: Velocities):
    if isinstance(velocities, VelocityHistory):
        return [velocities.field_at(s.time) for s in history]
    if len(velocities) != len(history):
        raise IntegrityError(f"{len(velocities)} velocity fields for {len(history)} states")
    return list(velocities)


def _normalized(value: float, reference: float) -> float:
    scale = abs(reference)
    return abs(value) / scale if scale > 0 else abs(value)


def renorm_residual(history: Sequence[State], velocities: Velocities, b_kind: str, field: str,
                    p: ModelParams, quadrature: str = SIMPSON) -> float:
    """|residual of the renormalized identity| / |int b(zeta)(0)|."""
    if b_kind not in B_KINDS:
        raise ParameterError(f"unknown renormalization '{b_kind}', expected one of {B_KINDS}")
    if field not in RENORM_FIELDS:
        raise ParameterError(f"unknown field '{field}', expected one of {RENORM_FIELDS}")
    if len(history) < 2:
        return 0.0

    times, mass, flux, source = [], [], [], []
    for s, u in zip(history, _velocity_list(history, velocities)):
        g = s.grid
        b, bpz = _renormalize(b_kind, field_values(s, field))
        div = divergence(u, g)
        times.append(s.time)
        mass.append(integral(b, g))
        if field in RATIO_FIELDS:
            flux.append(-integral(b * div, g))
        else:
            flux.append(integral((bpz - b) * div, g))
        source.append(integral(bpz, g) / (2.0 * p.lam) if field in DAMPED_FIELDS else 0.0)

    residual = (mass[-1] - mass[0]
                + cumulative_integral(flux, times, quadrature)[-1]
                + cumulative_integral(source, times, quadrature)[-1])
    logger.debug("renormalized residual %s/%s: %.3e (int b0 = %.4g)", b_kind, field, residual, mass[0])
    return _normalized(residual, mass[0])


def weighted_ratio_residual(history: Sequence[State], p: ModelParams,
                            quadrature: str = SIMPSON) -> float:
    """Residual of d/dt int eta s_tau^2 = -(1/lambda) int eta s_tau^2, normalized."""
    if len(history) < 2:
        return 0.0
    times, weighted = [], []
    for s in history:
        s_tau = field_values(s, "s_tau")
        times.append(s.time)
        weighted.append(integral(s.eta * s_tau ** 2, s.grid))
    decay = cumulative_integral(np.asarray(weighted) / p.lam, times, quadrature)[-1]
    return _normalized(weighted[-1] - weighted[0] + decay, weighted[0])


def weak_form_residual(history: Sequence[State], velocities: Velocities, field: str,
                       phi: Callable[[np.ndarray, np.ndarray], np.ndarray], p: ModelParams,
                       quadrature: str = SIMPSON) -> float:
    """
    Weak continuity residual for a smooth, time-independent test function phi(x, y):
    int zeta phi (t) - int zeta phi (0) - int_0^t int zeta u.grad phi
    + [zeta = tau] int_0^t int tau phi / (2 lambda), normalized by int |zeta phi|(0).
    """
    if field not in DENSITY_FIELDS:
        raise ParameterError(f"weak form residual needs a density field, got '{field}'")
    if len(history) < 2:
        return 0.0
    g = history[0].grid
    X, Y = g.cell_centers()
    phi_cells = np.asarray(phi(X, Y), dtype=float)
    grad_phi = gradient(phi_cells, g)

    times, paired, transport, source = [], [], [], []
    for s, u in zip(history, _velocity_list(history, velocities)):
        z = getattr(s, field)
        times.append(s.time)
        paired.append(integral(z * phi_cells, g))
        transport.append(integral(z * np.sum(u * grad_phi, axis=0), g))
        source.append(integral(z * phi_cells, g) / (2.0 * p.lam) if field == "tau" else 0.0)

    residual = (paired[-1] - paired[0]
                - cumulative_integral(transport, times, quadrature)[-1]
                + cumulative_integral(source, times, quadrature)[-1])
    reference = integral(np.abs(getattr(history[0], field) * phi_cells), g)
    return _normalized(residual, reference)


def eta_ratio_defect(s: State, s_reference: np.ndarray, p: ModelParams,
                     theta: float = 1.0, field: str = "s_tau") -> float:
    """int eta |s - s_reference|^theta for the ratio named by field."""
    if field not in RATIO_FIELDS:
        raise ParameterError(f"unknown ratio '{field}', expected one of {RATIO_FIELDS}")
    gap = np.abs(field_values(s, field) - np.asarray(s_reference, dtype=float))
    return integral(s.eta * gap ** theta, s.grid)
