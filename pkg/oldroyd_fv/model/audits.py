"""
Numeric sanity audits of the structural hypotheses on the concrete pressure.

These are measurements, not proofs: each audit scans the admissible set on a
grid and reports the constants it finds.
"""

import logging
from typing import Dict

import numpy as np

from .params import ModelParams, ThermoSample
from .thermo import helmholtz, total_pressure

logger = logging.getLogger(__name__)


def audit_small_density_bound(p: ModelParams, n_eta: int = 60, n_ratio: int = 21) -> Dict[str, float]:
    """
    Estimate alpha and C in |h(eta, eta*s_rho, eta*s_tau)| <= C eta^alpha for
    eta in (0, 1) and admissible ratios.

    alpha is min(1, gamma) for this pressure; 'alpha_fit' is the slope of
    log sup|h| against log eta over the smallest decade, as a cross-check.
    """
    etas = np.geomspace(1e-8, 1.0, n_eta)
    s = np.linspace(0.0, p.c_bar, n_ratio)
    sample = ThermoSample.from_ratios(etas[:, None, None], s[None, :, None], s[None, None, :])
    sup_h = np.max(np.abs(total_pressure(sample, p)), axis=(1, 2))

    alpha = min(1.0, p.gamma)
    constant = float(np.max(sup_h / etas ** alpha))
    low = etas <= etas[0] * 10.0
    alpha_fit = float(np.polyfit(np.log(etas[low]), np.log(sup_h[low]), 1)[0])
    logger.debug("small-density audit: alpha=%.3f fit=%.3f C=%.4g", alpha, alpha_fit, constant)
    return {"alpha": alpha, "alpha_fit": alpha_fit, "constant": constant}


def audit_energy_coercivity(p: ModelParams, c_under: float, eta_max: float,
                            n_eta: int = 200, n_ratio: int = 21) -> float:
    """
    Smallest value of (H + c_under) / (1 + eta^2 + rho^gamma + tau) over the
    admissible samples with eta <= eta_max. Positive means the shifted energy
    controls every density on that region.
    """
    etas = np.linspace(0.0, eta_max, n_eta)
    s = np.linspace(0.0, p.c_bar, n_ratio)
    sample = ThermoSample.from_ratios(etas[:, None, None], s[None, :, None], s[None, None, :])
    eta, rho, tau = sample.components()
    weight = 1.0 + eta ** 2 + rho ** p.gamma + tau
    return float(np.min((np.asarray(helmholtz(sample, p)) + c_under) / weight))
