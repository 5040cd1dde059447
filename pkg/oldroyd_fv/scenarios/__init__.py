"""
Scenarios module.

- presets: canned grids, initial data, velocities and verdict checks
- runner: time loop, studies (refinement pairs, twin runs, probes) and verdicts
"""

from .presets import (
    Check,
    Scenario,
    PRESETS,
    DYNAMIC,
    KINEMATIC,
    TWIN,
    STATIC,
    build,
    bump,
    override_keys,
    pulse_average,
    stream_velocity,
)
from .runner import (
    RunResult,
    Trajectory,
    Verdict,
    initial_acceleration,
    judge,
    oracle_agreement,
    oracle_refinement,
    polymer_pressure_twin,
    pulse_error,
    run,
    schedule,
    simulate,
)

__all__ = [
    'Check', 'Scenario', 'PRESETS', 'DYNAMIC', 'KINEMATIC', 'TWIN', 'STATIC',
    'build', 'bump', 'override_keys', 'pulse_average', 'stream_velocity',
    'RunResult', 'Trajectory', 'Verdict', 'initial_acceleration', 'judge',
    'oracle_agreement', 'oracle_refinement', 'polymer_pressure_twin', 'pulse_error', 'run', 'schedule', 'simulate',
]
