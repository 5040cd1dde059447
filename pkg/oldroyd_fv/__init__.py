"""
oldroyd-fv

Finite-volume simulator and verification harness for the simplified
compressible Oldroyd-B system: continuity equations for rho, eta and tau,
momentum balance with the signed total pressure h = q(eta) + p(rho) - tau,
and tau damped at rate 1/(2 lambda).

Subpackages:
- model: constants, pressures, free energy, decomposition, audits
- grid: mesh, fields, discrete operators
- solver: transport, momentum, coupled steps
- oracle: characteristics reference solutions and bounds
- diagnostics: energy budget and renormalized residuals
- scenarios: presets and verdicts
- io: configuration and output files
"""

__version__ = "0.1.0"
