"""
Grid and fields module.

- Grid: uniform 1D/2D cell-centered mesh with a boundary tag
- State: rho, eta, tau and momentum at one time level
- operators: ghost filling, central differences, donor-cell fluxes
"""

from .mesh import Grid, PERIODIC, NOSLIP, BOUNDARY_KINDS
from .fields import State, velocity_from_momentum, integral, RHO_FLOOR
from .operators import (
    SCALAR,
    VELOCITY,
    apply_bc,
    fill_ghosts,
    gradient,
    velocity_gradient,
    divergence,
    laplacian,
    face_velocities,
    flux_divergence,
    outflow_number,
)

__all__ = [
    'Grid', 'PERIODIC', 'NOSLIP', 'BOUNDARY_KINDS',
    'State', 'velocity_from_momentum', 'integral', 'RHO_FLOOR',
    'SCALAR', 'VELOCITY', 'apply_bc', 'fill_ghosts', 'gradient',
    'velocity_gradient', 'divergence', 'laplacian', 'face_velocities',
    'flux_divergence', 'outflow_number',
]
