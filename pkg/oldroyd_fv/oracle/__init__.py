"""
Characteristics oracle module.

Semi-Lagrangian reference solutions used to cross-check the Eulerian solver:
- VelocityHistory: time/space interpolated velocity snapshots
- trace: RK4 characteristics
- ratio_oracle / density_oracle: exact transport along characteristics
- bounds_report: pointwise a priori bounds on field histories
"""

from .characteristics import (
    VelocityHistory,
    trace,
    ratio_oracle,
    density_oracle,
    sample_field,
)
from .bounds import BoundRow, BoundsReport, bounds_report, BOUNDS_COLUMNS

__all__ = [
    'VelocityHistory', 'trace', 'ratio_oracle', 'density_oracle', 'sample_field',
    'BoundRow', 'BoundsReport', 'bounds_report', 'BOUNDS_COLUMNS',
]
