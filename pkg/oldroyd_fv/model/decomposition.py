# Monotone / compactly supported split of the total pressure

import logging
from dataclasses import replace

import numpy as np

from ..errors import DomainError, ParameterError
from .params import ArrayLike, ModelParams, require_non_negative
from .thermo import _out

logger = logging.getLogger(__name__)


def cutoff_chi(theta: ArrayLike, p: ModelParams):
    """
    Non-increasing C2 cutoff: 1 on [0, R1], 0 on [R, inf), quintic
    smoothstep in between.
    """
    theta = require_non_negative("theta", theta)
    t = np.clip((theta - p.r1_bar) / (p.r_bar - p.r1_bar), 0.0, 1.0)
    step = t ** 3 * (10.0 - 15.0 * t + 6.0 * t ** 2)
    return _out(1.0 - step)


def pressure_decomposition(eta: ArrayLike, s_rho: ArrayLike, s_tau: ArrayLike, p: ModelParams):
    """
    Return (P_mono, R_comp) with P_mono - R_comp = h(eta, eta*s_rho, eta*s_tau).

        P_mono = z eta^2 + k L eta + a eta^g s_rho^g - (1 - chi)(k eta + eta s_tau)
        R_comp = chi (k eta + eta s_tau)
    """
    eta = require_non_negative("eta", eta)
    s_rho = np.asarray(s_rho, dtype=float)
    s_tau = np.asarray(s_tau, dtype=float)
    for name, ratio in (("s_rho", s_rho), ("s_tau", s_tau)):
        if np.any(ratio < 0) or np.any(ratio > p.c_bar):
            raise DomainError(f"{name} must lie in [0, {p.c_bar}]")

    chi = np.asarray(cutoff_chi(eta, p))
    spring = p.k * eta + eta * s_tau
    mono = (p.z * eta ** 2 + p.k * p.L * eta
            + p.a * eta ** p.gamma * s_rho ** p.gamma
            - (1.0 - chi) * spring)
    return _out(mono), _out(chi * spring)


def monotone_part_is_monotone(p: ModelParams, n_eta: int = 400, n_ratio: int = 20,
                              tol: float = 1e-10) -> bool:
    """Forward differences of P_mono in eta over [0, 2R] x [0, c_bar]^2 are >= -tol."""
    eta = np.linspace(0.0, 2.0 * p.r_bar, n_eta)[:, None, None]
    s = np.linspace(0.0, p.c_bar, n_ratio)
    mono, _ = pressure_decomposition(eta, s[None, :, None], s[None, None, :], p)
    return bool(np.min(np.diff(mono, axis=0)) >= -tol)


def auto_select_radii(p: ModelParams, max_power: int = 40) -> ModelParams:
    """
    Copy of p with R1 the smallest power of two (at least 2) whose monotone
    part passes the forward-difference scan, and R = 2 R1.
    """
    for power in range(1, max_power + 1):
        r1 = 2.0 ** power
        candidate = replace(p, r1_bar=r1, r_bar=2.0 * r1)
        if monotone_part_is_monotone(candidate):
            logger.info("auto-selected decomposition radii R1=%g, R=%g", r1, 2.0 * r1)
            return candidate
    raise ParameterError("no decomposition radius up to 2**%d gives a monotone part" % max_power)
