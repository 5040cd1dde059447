# Newtonian stress, ratio variables and the tau reduction

from typing import Tuple

import numpy as np

from .params import ArrayLike, ModelParams, ThermoSample
from .thermo import _out


def newtonian_stress(grad_u: np.ndarray, p: ModelParams) -> np.ndarray:
    """
    S = mu_s (sym G - div/d I) + mu_b div I for G of shape (..., d, d).

    d is taken from the trailing axes of grad_u, so a (d, d) matrix and a
    field of matrices are both accepted.
    """
    G = np.asarray(grad_u, dtype=float)
    d = G.shape[-1]
    eye = np.eye(d)
    div = np.trace(G, axis1=-2, axis2=-1)[..., None, None]
    sym = 0.5 * (G + np.swapaxes(G, -1, -2))
    return p.mu_s * (sym - div / d * eye) + p.mu_b * div * eye


def stress_contraction(grad_u: np.ndarray, p: ModelParams):
    """S(G) : G, non-negative for every G."""
    G = np.asarray(grad_u, dtype=float)
    return _out(np.sum(newtonian_stress(G, p) * G, axis=(-2, -1)))


def reduce_tau(tau_full: ArrayLike, eta: ArrayLike, p: ModelParams):
    # no clamping: the reduced stress may be negative
    return _out(np.asarray(tau_full, dtype=float) - p.k * np.asarray(eta, dtype=float))


def ratios(s: ThermoSample) -> Tuple:
    """(rho/eta, tau/eta), with both set to 0 where eta = 0."""
    eta, rho, tau = s.components()
    live = eta > 0
    safe = np.where(live, eta, 1.0)
    s_rho = np.where(live, rho / safe, 0.0)
    s_tau = np.where(live, tau / safe, 0.0)
    return _out(s_rho), _out(s_tau)
