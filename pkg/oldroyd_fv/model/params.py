"""
Model constants and pointwise samples.

ModelParams bundles every physical constant of the simplified Oldroyd-B
system together with the two radii used by the pressure decomposition.
ThermoSample is an (eta, rho, tau) triple; its members may be plain floats
or numpy arrays of a common shape, so the same algebra runs pointwise or
over whole fields.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ..errors import DomainError, ParameterError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ModelParams:
    a: float = 1.0
    gamma: float = 1.4
    z: float = 1.0
    k: float = 1.0
    L: float = 0.5
    lam: float = 0.5
    mu_s: float = 0.1
    mu_b: float = 0.05
    c_bar: float = 2.0
    r1_bar: float = 8.0
    r_bar: float = 16.0
    dim: int = 2

    def __post_init__(self):
        checks = [
            (self.a > 0, "a must be positive"),
            (self.z > 0, "z must be positive"),
            (self.lam > 0, "lambda must be positive"),
            (self.mu_s > 0, "mu_s must be positive"),
            (self.mu_b >= 0, "mu_b must be non-negative"),
            (self.k >= 0, "k must be non-negative"),
            (self.L >= 0, "L must be non-negative"),
            (0 < self.gamma <= 2, f"gamma must lie in (0, 2], got {self.gamma}"),
            (self.c_bar > 0, "c_bar must be positive"),
            (1 < self.r1_bar < self.r_bar,
             f"radii must satisfy 1 < r1_bar < r_bar, got {self.r1_bar}, {self.r_bar}"),
            (self.dim in (1, 2), f"dim must be 1 or 2, got {self.dim}"),
        ]
        for ok, message in checks:
            if not ok:
                raise ParameterError(message)

    @property
    def polymer_slope(self) -> float:
        """k(L - 1), the linear coefficient of the polymer pressure."""
        return self.k * (self.L - 1.0)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


@dataclass(frozen=True)
class ThermoSample:
    eta: ArrayLike
    rho: ArrayLike
    tau: ArrayLike

    @classmethod
    def from_ratios(cls, eta: ArrayLike, s_rho: ArrayLike, s_tau: ArrayLike) -> "ThermoSample":
        eta = np.asarray(eta, dtype=float)
        return cls(eta=eta, rho=eta * s_rho, tau=eta * s_tau)

    def components(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (np.asarray(self.eta, dtype=float),
                np.asarray(self.rho, dtype=float),
                np.asarray(self.tau, dtype=float))

    def is_admissible(self, p: ModelParams) -> np.ndarray:
        """Cellwise membership in the admissible set (non-negative, dominated)."""
        eta, rho, tau = self.components()
        return ((eta >= 0) & (rho >= 0) & (tau >= 0)
                & (rho <= p.c_bar * eta) & (tau <= p.c_bar * eta))


def require_non_negative(name: str, value: ArrayLike) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f"{name} must be non-negative (min {arr.min():.3e})")
    return arr
