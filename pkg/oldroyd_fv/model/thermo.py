"""
Pressures and free energies of the three-density model.

All functions accept floats or numpy arrays. Scalar inputs give Python
floats back; array inputs give arrays of the same shape. The convention
0 log 0 = 0 is applied wherever a theta log theta term appears.
"""

import logging
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize

from ..errors import DomainError, ParameterError
from .params import ArrayLike, ModelParams, ThermoSample, require_non_negative

logger = logging.getLogger(__name__)

# values below this contribute nothing to theta log theta
LOG_FLOOR = 1e-300


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def xlogx(x: ArrayLike) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    positive = x > LOG_FLOOR
    safe = np.where(positive, x, 1.0)
    return np.where(positive, x * np.log(safe), 0.0)


# ── pressures ──────────────────────────────────────────────────────────────

def fluid_pressure(rho: ArrayLike, p: ModelParams):
    rho = require_non_negative("rho", rho)
    return _out(p.a * rho ** p.gamma)


def polymer_pressure(eta: ArrayLike, p: ModelParams):
    eta = require_non_negative("eta", eta)
    return _out(p.polymer_slope * eta + p.z * eta ** 2)


def total_pressure(s: ThermoSample, p: ModelParams):
    """h = q(eta) + p(rho) - tau. The stress enters with a negative sign."""
    tau = require_non_negative("tau", s.tau)
    return _out(np.asarray(polymer_pressure(s.eta, p))
                + np.asarray(fluid_pressure(s.rho, p)) - tau)


# ── energies ───────────────────────────────────────────────────────────────

def fluid_energy(rho: ArrayLike, p: ModelParams):
    rho = require_non_negative("rho", rho)
    if p.gamma == 1.0:
        return _out(p.a * xlogx(rho))
    return _out(p.a / (p.gamma - 1.0) * rho ** p.gamma)


def polymer_energy(eta: ArrayLike, p: ModelParams):
    eta = require_non_negative("eta", eta)
    return _out(p.z * eta ** 2 + p.polymer_slope * xlogx(eta))


def helmholtz(s: ThermoSample, p: ModelParams):
    """H = P(rho) + Q(eta) - tau log tau. Not bounded below by zero."""
    tau = require_non_negative("tau", s.tau)
    return _out(np.asarray(fluid_energy(s.rho, p))
                + np.asarray(polymer_energy(s.eta, p)) - xlogx(tau))


def shifted_helmholtz(s: ThermoSample, p: ModelParams, c_under: float):
    return _out(np.asarray(helmholtz(s, p)) + c_under)


# ── Gibbs relation ─────────────────────────────────────────────────────────

def gibbs_residual(s: ThermoSample, p: ModelParams):
    """
    rho*H_rho + eta*H_eta + tau*H_tau - H - h with closed-form derivatives.

    Vanishes identically for strictly positive samples, for both branches
    of the fluid energy.
    """
    eta, rho, tau = s.components()
    if np.any(eta <= 0) or np.any(rho <= 0) or np.any(tau <= 0):
        raise DomainError("gibbs_residual needs strictly positive samples")

    if p.gamma == 1.0:
        d_rho = p.a * (np.log(rho) + 1.0)
    else:
        d_rho = p.a * p.gamma / (p.gamma - 1.0) * rho ** (p.gamma - 1.0)
    d_eta = 2.0 * p.z * eta + p.polymer_slope * (np.log(eta) + 1.0)
    d_tau = -(np.log(tau) + 1.0)

    lhs = rho * d_rho + eta * d_eta + tau * d_tau - np.asarray(helmholtz(s, p))
    return _out(lhs - np.asarray(total_pressure(s, p)))


def gibbs_residual_numeric(s: ThermoSample, p: ModelParams,
                           energy: Optional[Callable] = None,
                           rel_step: float = 1e-5):
    """Same residual for an arbitrary energy callable, derivatives by central differences."""
    energy = energy or helmholtz
    eta, rho, tau = s.components()
    if np.any(eta <= 0) or np.any(rho <= 0) or np.any(tau <= 0):
        raise DomainError("gibbs_residual_numeric needs strictly positive samples")

    base = np.asarray(energy(s, p), dtype=float)
    euler = np.zeros_like(base)
    for name, value in (("eta", eta), ("rho", rho), ("tau", tau)):
        h = rel_step * value
        plus = dict(eta=eta, rho=rho, tau=tau)
        minus = dict(eta=eta, rho=rho, tau=tau)
        plus[name] = value + h
        minus[name] = value - h
        deriv = (np.asarray(energy(ThermoSample(**plus), p))
                 - np.asarray(energy(ThermoSample(**minus), p))) / (2.0 * h)
        euler = euler + value * deriv
    return _out(euler - base - np.asarray(total_pressure(s, p)))


# ── integral solution of the Gibbs equation ───────────────────────────────

def helmholtz_from_integral(s: ThermoSample, p: ModelParams, n_quad: int = 64):
    """
    Free energy rebuilt from the pressure alone.

    With eta as lead density and the ratios held fixed,

        H_int = eta * int_1^eta h(sigma, sigma*s_rho, sigma*s_tau) / sigma^2 dsigma.

    The integral is taken in log(sigma) with composite Simpson on n_quad
    intervals; H_int(0) = 0. H_int differs from the closed form by
    eta * integral_gauge(s_rho, s_tau), which the Gibbs operator annihilates.
    """
    if n_quad < 16:
        raise ParameterError(f"n_quad must be at least 16, got {n_quad}")
    n_quad += n_quad % 2

    eta, rho, tau = s.components()
    require_non_negative("eta", eta)
    shape = eta.shape
    eta, rho, tau = (np.atleast_1d(v).astype(float) for v in (eta, rho, tau))

    out = np.zeros(eta.shape)
    live = eta > 0
    if np.any(live):
        e = eta[live]
        s_rho = (rho[live] / e)[:, None]
        s_tau = (tau[live] / e)[:, None]
        log_eta = np.log(e)
        frac = np.linspace(0.0, 1.0, n_quad + 1)
        v = log_eta[:, None] * frac[None, :]
        sigma = np.exp(v)
        h = np.asarray(total_pressure(ThermoSample(sigma, sigma * s_rho, sigma * s_tau), p))
        integral = log_eta * integrate.simpson(h * np.exp(-v), dx=1.0 / n_quad, axis=-1)
        out[live] = e * integral
    return _out(out.reshape(shape))


def integral_gauge(s_rho: ArrayLike, s_tau: ArrayLike, p: ModelParams):
    """(H_int - H) / eta along the ray of fixed ratios; a degree-one term in the densities."""
    s_rho = np.asarray(s_rho, dtype=float)
    if p.gamma == 1.0:
        fluid = p.a * xlogx(s_rho)
    else:
        fluid = p.a * s_rho ** p.gamma / (p.gamma - 1.0)
    return _out(-p.z - fluid + xlogx(s_tau))


# ── lower shift of the free energy ─────────────────────────────────────────

def _ratio_grid(p: ModelParams, n: int):
    s = np.linspace(0.0, p.c_bar, n)
    return np.meshgrid(s, s, indexing="ij")


def _min_over_ratios(eta: float, p: ModelParams, n: int) -> float:
    s_rho, s_tau = _ratio_grid(p, n)
    return float(np.min(helmholtz(ThermoSample.from_ratios(eta, s_rho, s_tau), p)))


def positivity_radius(p: ModelParams, n_ratio: int = 101,
                      eta_min: float = 1e-6, eta_max: float = 1e6) -> float:
    """
    Smallest R2 with H > 0 on every admissible sample with eta >= R2.

    Coarse geometric scan in eta, then brentq on the last sign change of the
    ratio-minimised free energy.
    """
    etas = np.geomspace(eta_min, eta_max, 400)
    mins = np.array([_min_over_ratios(e, p, n_ratio) for e in etas])
    if mins[-1] <= 0:
        raise ParameterError(
            f"free energy is not positive for large eta (min {mins[-1]:.3e} at eta={eta_max:g})")

    non_positive = np.nonzero(mins <= 0)[0]
    if non_positive.size == 0:
        return float(etas[0])
    j = int(non_positive[-1])
    radius = optimize.brentq(lambda e: _min_over_ratios(e, p, n_ratio), etas[j], etas[j + 1])
    logger.debug("positivity radius R2 = %.6g", radius)
    return float(radius)


def compute_shift(p: ModelParams, n_scan: int = 200, r2: Optional[float] = None) -> float:
    """
    c_under = 1 - min H over admissible samples with eta <= R2.

    Dense scan of (eta, s_rho, s_tau) in [0, R2] x [0, c_bar]^2, refined by a
    bounded L-BFGS-B descent from the best grid point.
    """
    r2 = positivity_radius(p) if r2 is None else r2
    etas = np.linspace(0.0, r2, n_scan)
    s_rho, s_tau = _ratio_grid(p, n_scan)
    s_axis = np.linspace(0.0, p.c_bar, n_scan)

    best = (0.0, 0.0, 0.0)
    h_min = np.inf
    for e in etas:
        values = np.asarray(helmholtz(ThermoSample.from_ratios(e, s_rho, s_tau), p))
        idx = np.unravel_index(np.argmin(values), values.shape)
        if values[idx] < h_min:
            h_min = float(values[idx])
            best = (float(e), float(s_axis[idx[0]]), float(s_axis[idx[1]]))

    lower = np.zeros(3)
    upper = np.array([r2, p.c_bar, p.c_bar])

    def objective(x):
        x = np.clip(x, lower, upper)
        return float(helmholtz(ThermoSample.from_ratios(x[0], x[1], x[2]), p))

    result = optimize.minimize(
        objective, np.array(best), method="L-BFGS-B",
        bounds=list(zip(lower, upper)),
        options={"ftol": 1e-15, "gtol": 1e-12},
    )
    if np.isfinite(result.fun):
        h_min = min(h_min, float(result.fun))
    logger.info("free energy minimum %.6g on [0, %.4g]; shift %.6g", h_min, r2, 1.0 - h_min)
    return 1.0 - h_min
