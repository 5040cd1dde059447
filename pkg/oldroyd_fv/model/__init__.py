"""
Core model module.

Pointwise algebra of the simplified compressible Oldroyd-B system:
- ModelParams / ThermoSample: constants and (eta, rho, tau) samples
- thermo: pressures, free energies, Gibbs relation, lower energy shift
- decomposition: monotone / compactly supported split of the pressure
- stress: Newtonian stress, ratio variables, tau reduction
- audits: numeric checks of the structural hypotheses
"""

from .params import ModelParams, ThermoSample
from .thermo import (
    xlogx,
    fluid_pressure,
    polymer_pressure,
    total_pressure,
    fluid_energy,
    polymer_energy,
    helmholtz,
    shifted_helmholtz,
    gibbs_residual,
    gibbs_residual_numeric,
    helmholtz_from_integral,
    integral_gauge,
    positivity_radius,
    compute_shift,
)
from .decomposition import cutoff_chi, pressure_decomposition, auto_select_radii
from .stress import newtonian_stress, stress_contraction, reduce_tau, ratios
from .audits import audit_small_density_bound, audit_energy_coercivity

__all__ = [
    'ModelParams', 'ThermoSample',
    'xlogx', 'fluid_pressure', 'polymer_pressure', 'total_pressure',
    'fluid_energy', 'polymer_energy', 'helmholtz', 'shifted_helmholtz',
    'gibbs_residual', 'gibbs_residual_numeric', 'helmholtz_from_integral',
    'integral_gauge', 'positivity_radius', 'compute_shift',
    'cutoff_chi', 'pressure_decomposition', 'auto_select_radii',
    'newtonian_stress', 'stress_contraction', 'reduce_tau', 'ratios',
    'audit_small_density_bound', 'audit_energy_coercivity',
]
