# Full time steps: densities first, then momentum with the updated densities

import logging

import numpy as np

from ..grid import State, velocity_from_momentum
from ..model import ModelParams
from .momentum import MomentumConfig, momentum_step
from .transport import DAMPED, TransportConfig, transport_substep

logger = logging.getLogger(__name__)


def advance(s: State, dt: float, p: ModelParams, tc: TransportConfig, mc: MomentumConfig) -> State:
    """
    One step of the coupled system. The pressure seen by the momentum update
    is built from the already transported densities.
    """
    u = velocity_from_momentum(s)
    mid = transport_substep(s, u, dt, s.grid, tc, p)
    mom = momentum_step(mid, dt, s.grid, p, mc)
    return mid.replace(mom=mom)


def advance_kinematic(s: State, u: np.ndarray, dt: float, p: ModelParams, tc: TransportConfig,
                      tau_source: str = DAMPED) -> State:
    """Transport with a prescribed velocity; momentum follows as rho u."""
    nxt = transport_substep(s, u, dt, s.grid, tc, p, tau_source=tau_source)
    return nxt.replace(mom=nxt.rho * u)
