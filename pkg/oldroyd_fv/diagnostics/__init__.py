"""
Diagnostics module.

- energy: energy budget records, residual, masses and domination margin
- renormalized: renormalized, weighted-ratio and weak-form residuals,
  and the eta-weighted ratio defect
"""

from .energy import (
    DiagnosticsRecord,
    DiagnosticsRecorder,
    RECORD_FIELDS,
    SIMPSON,
    TRAPEZOID,
    kinetic_energy,
    free_energy,
    total_energy,
    domination_margin,
    source_rate,
    dissipation_rate,
    work_rate,
    cumulative_integral,
    residual_series,
    energy_residual,
)
from .renormalized import (
    B_KINDS,
    RENORM_FIELDS,
    field_values,
    renorm_residual,
    weighted_ratio_residual,
    weak_form_residual,
    eta_ratio_defect,
)

__all__ = [
    'DiagnosticsRecord', 'DiagnosticsRecorder', 'RECORD_FIELDS', 'SIMPSON', 'TRAPEZOID',
    'kinetic_energy', 'free_energy', 'total_energy', 'domination_margin',
    'source_rate', 'dissipation_rate', 'work_rate', 'cumulative_integral',
    'residual_series', 'energy_residual',
    'B_KINDS', 'RENORM_FIELDS', 'field_values', 'renorm_residual',
    'weighted_ratio_residual', 'weak_form_residual', 'eta_ratio_defect',
]
