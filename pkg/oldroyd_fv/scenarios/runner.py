"""
Running scenarios and judging them.

A scenario names a study; the study runs the solver once or several times
(refinement pairs, twin runs), turns the outcome into named measurements and
the scenario's checks turn those into a verdict.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..errors import IntegrityError
from ..grid import Grid, State, integral
from ..model import ModelParams, polymer_pressure, ratios, reduce_tau
from ..diagnostics import (
    DiagnosticsRecord,
    DiagnosticsRecorder,
    energy_residual,
    renorm_residual,
    weighted_ratio_residual,
)
from ..oracle import BoundsReport, VelocityHistory, bounds_report, ratio_oracle
from ..solver import (
    DAMPED,
    FULL,
    advance,
    advance_kinematic,
    cfl_dt,
    momentum_step,
    stable_dt,
)
from .presets import DYNAMIC, Scenario

logger = logging.getLogger(__name__)

Observer = Callable[[int, State], None]

# steps are counted with ceil(T / dt); keep an exact multiple from rounding up
_STEP_ROUNDING = 1e-9


@dataclass
class Verdict:
    scenario: str
    claim: str
    passed: bool
    measurements: Dict[str, float]
    checks: List[Dict[str, object]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "claim": self.claim,
            "passed": self.passed,
            "measurements": self.measurements,
            "checks": self.checks,
        }

    def failed_checks(self) -> List[str]:
        return [c["check"] for c in self.checks if not c["passed"]]


@dataclass
class Trajectory:
    final: State
    history: List[DiagnosticsRecord]
    states: List[State]
    dt: float
    n_steps: int


@dataclass
class RunResult:
    final_state: State
    history: List[DiagnosticsRecord]
    verdict: Verdict
    states: List[State] = field(default_factory=list)
    bounds: Optional[BoundsReport] = None


@dataclass
class _Outcome:
    trajectory: Trajectory
    measurements: Dict[str, float]
    bounds: Optional[BoundsReport] = None


# ── time loop ──────────────────────────────────────────────────────────────

def schedule(sc: Scenario, s: State, u: Optional[np.ndarray] = None) -> Tuple[float, int]:
    """
    (dt, number of steps). An explicit dt is used as is; otherwise dt is the
    stable step of the initial state, shortened so that an end time is hit
    exactly.
    """
    if sc.dt is not None:
        if sc.n_steps is not None:
            return sc.dt, sc.n_steps
        return sc.dt, int(np.ceil(sc.end_time / sc.dt - _STEP_ROUNDING))

    if u is not None:
        dt_stable = min(cfl_dt(u, sc.grid, sc.transport),
                        sc.transport.source_cfl * 2.0 * sc.params.lam)
    else:
        dt_stable = stable_dt(s, sc.grid, sc.params, sc.momentum, sc.transport)
    if sc.n_steps is not None:
        return dt_stable, sc.n_steps
    n = max(1, int(np.ceil(sc.end_time / dt_stable - _STEP_ROUNDING)))
    return sc.end_time / n, n


def simulate(sc: Scenario, initial: Optional[State] = None, tau_source: str = DAMPED,
             observer: Optional[Observer] = None) -> Trajectory:
    g, p = sc.grid, sc.params
    s = initial if initial is not None else sc.initial(g, p)
    u = sc.velocity(g) if sc.velocity is not None else None
    dt, n = schedule(sc, s, u)
    logger.info("%s: %s, dt=%.4g, %d steps", sc.name, g.describe(), dt, n)

    recorder = DiagnosticsRecorder(p, sc.momentum)
    states: List[State] = []

    def visit(step: int, state: State):
        last = step == n
        if step % sc.record_every == 0 or last:
            if sc.kind == DYNAMIC:
                state.validate()
            recorder.record(state)
        if sc.keep_every and (step % sc.keep_every == 0 or last):
            states.append(state)
        if observer is not None:
            observer(step, state)

    visit(0, s)
    for step in range(1, n + 1):
        if u is None:
            s = advance(s, dt, p, sc.transport, sc.momentum)
        else:
            s = advance_kinematic(s, u, dt, p, sc.transport, tau_source=tau_source)
        logger.debug("step %d, t=%.6g", step, s.time)
        visit(step, s)

    return Trajectory(final=s, history=recorder.history(), states=states, dt=dt, n_steps=n)


# ── studies ────────────────────────────────────────────────────────────────

def _order(coarse: float, fine: float) -> float:
    if fine <= 0:
        return np.inf if coarse > 0 else 0.0
    return float(np.log2(coarse / fine))


def _energy_decay(sc: Scenario, observer: Optional[Observer]) -> _Outcome:
    traj = simulate(sc, observer=observer)
    s0 = sc.initial(sc.grid, sc.params)
    exact = s0.tau * np.exp(-traj.final.time / (2.0 * sc.params.lam))
    return _Outcome(traj, {
        "energy_residual": energy_residual(traj.history, magnitude=True),
        "energy_residual_signed": energy_residual(traj.history),
        "tau_decay_error": float(np.max(np.abs(traj.final.tau - exact))),
        "final_time": traj.final.time,
    })


def _translated(sc: Scenario, shift: float, g: Grid) -> State:
    """Initial data moved by shift along x; exact for a constant prescribed speed."""
    moved = Grid(g.nx, g.ny, g.bc, (g.origin[0] - shift, g.origin[1]), g.extent)
    return sc.initial(moved, sc.params)


def pulse_error(values: np.ndarray, exact: np.ndarray, g: Grid, floor: float, height: float) -> float:
    """
    L1 distance between cell values and a translated pulse floor + height * 1_I,
    given the pulse's exact cell averages. Inside a cut cell the indicator
    covers the fraction a of the cell, so the cell contributes
    dx * height * (a |1 - v| + (1 - a) |v|) for normalized values v.
    """
    a = (exact - floor) / height
    v = (values - floor) / height
    return height * integral(a * np.abs(1.0 - v) + (1.0 - a) * np.abs(v), g)


def _convergence(sc: Scenario, observer: Optional[Observer]) -> _Outcome:
    speed = sc.options.get("speed", 1.0)
    floor = sc.options.get("pulse_floor", 0.0)
    height = sc.options.get("pulse_height", 1.0)
    errors = {}
    first = None
    for level, case in (("coarse", sc), ("fine", sc.refined())):
        traj = simulate(case, observer=observer if level == "coarse" else None)
        if first is None:
            first = traj
        exact = _translated(case, speed * traj.final.time, case.grid)
        errors[f"smooth_error_{level}"] = integral(np.abs(traj.final.eta - exact.eta), case.grid)
        errors[f"pulse_error_{level}"] = pulse_error(traj.final.rho, exact.rho, case.grid, floor, height)

    measurements = dict(errors)
    measurements["smooth_order"] = _order(errors["smooth_error_coarse"], errors["smooth_error_fine"])
    measurements["pulse_order"] = _order(errors["pulse_error_coarse"], errors["pulse_error_fine"])
    return _Outcome(first, measurements)


def _relative_drift(values: List[float], reference: List[float]) -> float:
    values = np.asarray(values)
    reference = np.asarray(reference)
    return float(np.max(np.abs(values - reference)) / abs(reference[0]))


def _domination(sc: Scenario, observer: Optional[Observer]) -> _Outcome:
    p = sc.params
    traj = simulate(sc, observer=observer)
    hist = traj.history
    times = np.array([r.time for r in hist])
    first = hist[0]

    measurements = {
        "min_margin": min(r.domination_margin for r in hist),
        "mass_rho_drift": _relative_drift([r.mass_rho for r in hist], [first.mass_rho] * len(hist)),
        "mass_eta_drift": _relative_drift([r.mass_eta for r in hist], [first.mass_eta] * len(hist)),
        "tau_mass_error": _relative_drift([r.mass_tau for r in hist],
                                          list(first.mass_tau * np.exp(-times / (2.0 * p.lam)))),
        "final_time": traj.final.time,
    }

    bounds = None
    if traj.states:
        vh = VelocityHistory.steady(sc.grid, sc.velocity(sc.grid))
        measurements["renorm_square_s_tau"] = renorm_residual(traj.states, vh, "square", "s_tau", p)
        measurements["renorm_xlogx_eta"] = renorm_residual(traj.states, vh, "xlogx", "eta", p)
        measurements["weighted_ratio_residual"] = weighted_ratio_residual(traj.states, p)
        bounds = bounds_report(traj.states, vh, p)
        measurements["bounds_worst_slack"] = bounds.worst_slack
        if "s_tau" in sc.profiles:
            measurements.update(oracle_agreement(sc, traj.final, vh))
            if sc.refine and "oracle_time" in sc.options:
                pair = oracle_refinement(sc)
                pair["oracle_in_range"] = min(pair["oracle_in_range"], measurements["oracle_in_range"])
                measurements.update(pair)
    return _Outcome(traj, measurements, bounds)


def oracle_agreement(sc: Scenario, s: State, vh: VelocityHistory) -> Dict[str, float]:
    """L1 distance between the Eulerian s_tau and its characteristics solution."""
    profile = sc.profiles["s_tau"]
    oracle = ratio_oracle(lambda pts: profile(pts[:, 0], pts[:, 1]), vh, s.time,
                          damped=True, p=sc.params)
    _, s_tau = ratios(s.thermo())
    in_range = bool(np.min(oracle) >= 0.0 and np.max(oracle) <= sc.params.c_bar)
    return {
        "oracle_l1_s_tau": integral(np.abs(s_tau - oracle), sc.grid),
        "oracle_in_range": 1.0 if in_range else 0.0,
    }


def oracle_refinement(sc: Scenario) -> Dict[str, float]:
    """
    Oracle gap on the scenario grid and on the refined grid after the short
    window options["oracle_time"]. The flow shears the ratio profile into
    filaments, so later gaps are dominated by profiles the grids cannot resolve.
    """
    window = sc.options["oracle_time"]
    gaps = {}
    in_range = 1.0
    for level, case in (("coarse", sc), ("fine", sc.refined())):
        short = replace(case, end_time=window, n_steps=None, keep_every=0)
        traj = simulate(short)
        vh = VelocityHistory.steady(short.grid, short.velocity(short.grid))
        agreement = oracle_agreement(short, traj.final, vh)
        gaps[level] = agreement["oracle_l1_s_tau"]
        in_range = min(in_range, agreement["oracle_in_range"])
    logger.info("oracle gap %.3e -> %.3e over t=%g", gaps["coarse"], gaps["fine"], window)
    return {
        "oracle_l1_coarse": gaps["coarse"],
        "oracle_l1_fine": gaps["fine"],
        "oracle_order": _order(gaps["coarse"], gaps["fine"]),
        "oracle_in_range": in_range,
    }


def _energy_refinement(sc: Scenario, observer: Optional[Observer]) -> _Outcome:
    coarse = simulate(sc, observer=observer)
    fine = simulate(sc.refined())
    rc = energy_residual(coarse.history, magnitude=True)
    rf = energy_residual(fine.history, magnitude=True)
    ratio = rc / rf if rf > 0 else np.inf
    return _Outcome(coarse, {
        "residual_coarse": rc,
        "residual_fine": rf,
        "residual_ratio": float(ratio),
        "residual_order": _order(rc, rf),
    })


def _reduction(sc: Scenario, observer: Optional[Observer]) -> _Outcome:
    p = sc.params
    reduced0 = sc.initial(sc.grid, p)
    full0 = reduced0.replace(tau=reduced0.tau + p.k * reduced0.eta)
    full = simulate(sc, initial=full0, tau_source=FULL)
    reduced = simulate(sc, initial=reduced0, tau_source=DAMPED, observer=observer)
    if full.n_steps != reduced.n_steps:
        raise IntegrityError("twin runs took different step counts")

    gap = reduce_tau(full.final.tau, full.final.eta, p) - reduced.final.tau
    return _Outcome(reduced, {
        "reduction_sup_diff": float(np.max(np.abs(gap))),
        "eta_sup_diff": float(np.max(np.abs(full.final.eta - reduced.final.eta))),
        "steps": float(reduced.n_steps),
    })


def initial_acceleration(s: State, sc: Scenario) -> np.ndarray:
    """x-acceleration of the momentum right-hand side, (m(dt) - m) / (dt rho)."""
    dt = stable_dt(s, sc.grid, sc.params, sc.momentum, sc.transport)
    mom = momentum_step(s, dt, sc.grid, sc.params, sc.momentum)
    return ((mom - s.mom) / dt / s.rho)[0]


def polymer_pressure_twin(s: State, p: ModelParams) -> State:
    """
    Same pressure bump carried by q(eta) instead of -tau: tau is flattened to
    its minimum and eta raised until q(eta) grows by the removed amplitude.
    """
    base = float(np.min(s.tau))
    target = polymer_pressure(s.eta, p) + (s.tau - base)
    c1 = p.polymer_slope
    eta = (-c1 + np.sqrt(c1 ** 2 + 4.0 * p.z * target)) / (2.0 * p.z)
    return State.at_rest(s.grid, rho=s.rho, eta=eta, tau=np.full(s.grid.shape, base))


def _pressure_sign(sc: Scenario, observer: Optional[Observer]) -> _Outcome:
    p = sc.params
    s = sc.initial(sc.grid, p)
    x, _ = sc.grid.axes()
    center = x[int(np.argmax(s.tau[0]))]
    flank = sc.options.get("flank", 0.08)
    left = int(np.argmin(np.abs(x - (center - flank))))
    right = int(np.argmin(np.abs(x - (center + flank))))

    a_tau = initial_acceleration(s, sc)[0]
    a_eta = initial_acceleration(polymer_pressure_twin(s, p), sc)[0]
    if observer is not None:
        observer(0, s)

    recorder = DiagnosticsRecorder(p, sc.momentum)
    recorder.record(s)
    traj = Trajectory(final=s, history=recorder.history(), states=[s], dt=0.0, n_steps=0)
    return _Outcome(traj, {
        "tau_accel_left": float(a_tau[left]),
        "tau_accel_right": float(a_tau[right]),
        "eta_accel_left": float(a_eta[left]),
        "eta_accel_right": float(a_eta[right]),
        "tau_toward_max": 1.0 if a_tau[left] > 0 and a_tau[right] < 0 else 0.0,
        "eta_away_from_max": 1.0 if a_eta[left] < 0 and a_eta[right] > 0 else 0.0,
    })


STUDIES: Dict[str, Callable[[Scenario, Optional[Observer]], _Outcome]] = {
    "energy_decay": _energy_decay,
    "convergence": _convergence,
    "domination": _domination,
    "energy_refinement": _energy_refinement,
    "reduction": _reduction,
    "pressure_sign": _pressure_sign,
}


def judge(sc: Scenario, measurements: Dict[str, float]) -> Verdict:
    checks = []
    for check in sc.checks:
        checks.append({
            "check": check.describe(),
            "value": measurements.get(check.measure),
            "passed": check.passes(measurements),
        })
    passed = all(c["passed"] for c in checks)
    return Verdict(sc.name, sc.claim, passed, measurements, checks)


def run(sc: Scenario, observer: Optional[Observer] = None) -> RunResult:
    """Run a scenario's study and judge it against the scenario's checks."""
    if sc.study not in STUDIES:
        raise IntegrityError(f"scenario '{sc.name}' names unknown study '{sc.study}'")
    outcome = STUDIES[sc.study](sc, observer)
    verdict = judge(sc, outcome.measurements)
    logger.info("%s verdict: %s", sc.name, "pass" if verdict.passed else "FAIL")
    for c in verdict.checks:
        logger.info("  %s -> %s (%s)", c["check"], c["value"], "ok" if c["passed"] else "failed")
    traj = outcome.trajectory
    return RunResult(traj.final, traj.history, verdict, traj.states, outcome.bounds)
