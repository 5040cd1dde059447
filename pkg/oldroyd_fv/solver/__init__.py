"""
Solver module.

- transport: donor-cell transport of rho, eta, tau with exact tau source
- momentum: explicit momentum update and time step limits
- stepper: coupled and kinematic full steps
"""

from .transport import (
    TransportConfig,
    LIE,
    STRANG,
    DAMPED,
    FULL,
    upwind_step,
    damping_step,
    full_tau_source_step,
    cfl_dt,
    transport_substep,
)
from .momentum import (
    MomentumConfig,
    FORCINGS,
    forcing_field,
    balance_forcing,
    viscous_force,
    dissipation_density,
    viscous_dt,
    sound_speed,
    stable_dt_limits,
    stable_dt,
    momentum_step,
)
from .stepper import advance, advance_kinematic

__all__ = [
    'TransportConfig', 'LIE', 'STRANG', 'DAMPED', 'FULL',
    'upwind_step', 'damping_step', 'full_tau_source_step', 'cfl_dt', 'transport_substep',
    'MomentumConfig', 'FORCINGS', 'forcing_field', 'balance_forcing', 'viscous_force',
    'dissipation_density', 'viscous_dt', 'sound_speed', 'stable_dt_limits', 'stable_dt',
    'momentum_step', 'advance', 'advance_kinematic',
]
