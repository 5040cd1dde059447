"""
Canned scenarios.

Each preset fixes a grid, model constants, analytic initial data (smooth
bumps on top of a positive floor), an optional prescribed velocity, a time
policy and the checks that decide its verdict. `build` returns a fresh
Scenario; overrides use the flat "section.key" names of the run config.
"""

import logging
import operator
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from ..errors import ParameterError, ScenarioError
from ..grid import NOSLIP, PERIODIC, Grid, State
from ..model import ModelParams
from ..solver import LIE, STRANG, MomentumConfig, TransportConfig

logger = logging.getLogger(__name__)

# run kinds
DYNAMIC = "dynamic"        # all equations live
KINEMATIC = "kinematic"    # densities transported by a prescribed velocity
TWIN = "twin"              # full tau source against the reduced system
STATIC = "static"           # single evaluation of the momentum right-hand side

Profile = Callable[[np.ndarray, np.ndarray], np.ndarray]

_OPERATORS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


@dataclass(frozen=True)
class Check:
    """One verdict condition: measurements[measure] <op> threshold."""

    measure: str
    op: str
    threshold: float

    def __post_init__(self):
        if self.op not in _OPERATORS:
            raise ParameterError(f"unknown comparison '{self.op}'")

    def passes(self, measurements: Mapping[str, float]) -> bool:
        value = measurements.get(self.measure)
        if value is None or not np.isfinite(value):
            return False
        return bool(_OPERATORS[self.op](value, self.threshold))

    def describe(self) -> str:
        return f"{self.measure} {self.op} {self.threshold:g}"


@dataclass
class Scenario:
    name: str
    claim: str
    kind: str
    study: str
    grid: Grid
    params: ModelParams
    transport: TransportConfig
    momentum: MomentumConfig
    initial: Callable[[Grid, ModelParams], State]
    checks: Tuple[Check, ...]
    velocity: Optional[Callable[[Grid], np.ndarray]] = None
    end_time: Optional[float] = None
    n_steps: Optional[int] = None
    dt: Optional[float] = None
    record_every: int = 1
    keep_every: int = 0
    refine: bool = False
    profiles: Dict[str, Profile] = field(default_factory=dict)
    options: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.end_time is None and self.n_steps is None:
            raise ParameterError(f"scenario '{self.name}' needs an end time or a step count")
        if self.end_time is not None and self.end_time <= 0:
            raise ParameterError(f"end_time must be positive, got {self.end_time}")
        if self.n_steps is not None and self.n_steps < 1:
            raise ParameterError(f"n_steps must be at least 1, got {self.n_steps}")
        if self.dt is not None and self.dt <= 0:
            raise ParameterError(f"dt must be positive, got {self.dt}")
        if self.record_every < 1 or self.keep_every < 0:
            raise ParameterError("record_every must be >= 1 and keep_every >= 0")
        if self.params.dim != self.grid.dim:
            raise ParameterError(f"model dim {self.params.dim} does not match a {self.grid.dim}D grid")

    def refined(self, factor: int = 2) -> "Scenario":
        """Same scenario on a grid refined by factor; an explicit dt shrinks with it."""
        dt = self.dt / factor if self.dt is not None else None
        return replace(self, grid=self.grid.refined(factor), dt=dt, refine=False)

    def describe(self) -> str:
        return f"{self.name}: {self.claim} [{self.grid.describe()}]"


# ── analytic profiles ──────────────────────────────────────────────────────

def bump(X: np.ndarray, Y: np.ndarray, center: Tuple[float, float], width: float) -> np.ndarray:
    """Gaussian bump of unit height."""
    r2 = (X - center[0]) ** 2 + (Y - center[1]) ** 2
    return np.exp(-r2 / (2.0 * width ** 2))


def _central(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: float) -> np.ndarray:
    return (f(x + h) - f(x - h)) / (2.0 * h)


def stream_velocity(g: Grid) -> np.ndarray:
    """
    Cellular flow from psi = sin^2(pi x) sin^2(pi y) on the unit box.

    u = f(x) D_y s(y), v = -D_x f(x) s(y) with D the grid's central
    difference, so the discrete divergence vanishes away from the walls.
    The velocity is zero on the walls.
    """
    X, Y = g.cell_centers()

    def shape(t):
        return np.sin(np.pi * t) ** 2

    u = shape(X) * _central(shape, Y, g.dy)
    v = -_central(shape, X, g.dx) * shape(Y)
    return np.stack([u, v])


def _uniform_damping_initial(g: Grid, p: ModelParams) -> State:
    ones = np.ones(g.shape)
    return State.at_rest(g, rho=1.0 * ones, eta=1.5 * ones, tau=0.8 * ones)


_PULSE = (0.3, 0.7)


def _overlap(a: np.ndarray, b: np.ndarray, lo: float, hi: float) -> np.ndarray:
    return np.maximum(0.0, np.minimum(b, hi) - np.maximum(a, lo))


def pulse_average(X: np.ndarray, dx: float) -> np.ndarray:
    """Exact cell averages of the periodic indicator of [0.3, 0.7] on cells of width dx."""
    left = np.mod(X - 0.5 * dx, 1.0)
    right = left + dx
    lo, hi = _PULSE
    # a cell starting near 1 wraps onto the next period's copy of the pulse
    return (_overlap(left, right, lo, hi) + _overlap(left, right, lo + 1.0, hi + 1.0)) / dx


def _advection_initial(g: Grid, p: ModelParams) -> State:
    X, _ = g.cell_centers()
    rho = 0.5 + pulse_average(X, g.dx)
    eta = 1.5 + 0.5 * np.sin(2.0 * np.pi * X)
    tau = 0.5 * np.ones(g.shape)
    return State(g, rho, eta, tau, rho[None] * 1.0)


def _advection_velocity(g: Grid) -> np.ndarray:
    return np.ones(g.vector_shape)


_VORTEX_WIDTH = 0.12


def _vortex_eta(X, Y):
    return 2.5 + 0.5 * bump(X, Y, (0.5, 0.35), _VORTEX_WIDTH)


def _vortex_s_rho(X, Y):
    return 1.0 + 0.5 * bump(X, Y, (0.35, 0.6), _VORTEX_WIDTH)


def _vortex_s_tau(X, Y):
    return 1.0 + 0.5 * bump(X, Y, (0.65, 0.6), _VORTEX_WIDTH)


def _vortex_initial(g: Grid, p: ModelParams) -> State:
    X, Y = g.cell_centers()
    eta = _vortex_eta(X, Y)
    u = stream_velocity(g)
    rho = eta * _vortex_s_rho(X, Y)
    return State(g, rho, eta, eta * _vortex_s_tau(X, Y), rho * u)


def _driven_initial(g: Grid, p: ModelParams) -> State:
    X, Y = g.cell_centers()
    b = bump(X, Y, (0.5, 0.5), 0.15)
    rho = 1.0 + 0.2 * b
    u = 0.5 * np.stack([
        np.sin(np.pi * X) ** 2 * np.sin(2.0 * np.pi * Y),
        -np.sin(2.0 * np.pi * X) * np.sin(np.pi * Y) ** 2,
    ])
    return State(g, rho, 1.2 + 0.2 * b, 0.6 + 0.2 * b, rho * u)


def _twin_velocity(g: Grid) -> np.ndarray:
    X, Y = g.cell_centers()
    return np.stack([
        0.3 * np.sin(2.0 * np.pi * Y) + 0.2 * np.sin(2.0 * np.pi * X),
        0.3 * np.cos(2.0 * np.pi * X),
    ])


def _twin_initial(g: Grid, p: ModelParams) -> State:
    """Reduced-system data; the full-source twin adds k eta to tau."""
    X, Y = g.cell_centers()
    eta = 1.0 + 0.3 * np.sin(2.0 * np.pi * X) * np.cos(2.0 * np.pi * Y)
    rho = 1.0 + 0.2 * bump(X, Y, (0.4, 0.5), 0.15)
    tau = 0.3 + 0.2 * bump(X, Y, (0.6, 0.4), 0.1)
    return State(g, rho, eta, tau, rho * _twin_velocity(g))


def _tau_bump_initial(g: Grid, p: ModelParams) -> State:
    X, _ = g.cell_centers()
    ones = np.ones(g.shape)
    tau = 0.5 + 0.5 * bump(X, 0.0 * X, (0.5, 0.0), 0.08)
    return State.at_rest(g, rho=ones, eta=ones, tau=tau)


# ── presets ────────────────────────────────────────────────────────────────

def _uniform_damping() -> Scenario:
    g = Grid(32, 32, PERIODIC)
    return Scenario(
        name="uniform_damping",
        claim="energy inequality holds with equality for resting uniform data; tau decays as exp(-t/2 lambda)",
        kind=DYNAMIC, study="energy_decay", grid=g,
        params=ModelParams(), transport=TransportConfig(splitting=STRANG),
        momentum=MomentumConfig(), initial=_uniform_damping_initial,
        checks=(Check("energy_residual", "<", 1e-8), Check("tau_decay_error", "<", 1e-10)),
        end_time=1.0, dt=1e-3,
    )


def _advection_periodic() -> Scenario:
    g = Grid(128, 1, PERIODIC)
    return Scenario(
        name="advection_periodic",
        claim="donor-cell transport converges to the exact translation (first order smooth, half order for jumps)",
        kind=KINEMATIC, study="convergence", grid=g,
        params=ModelParams(dim=1), transport=TransportConfig(cfl=0.4, splitting=STRANG),
        momentum=MomentumConfig(), initial=_advection_initial, velocity=_advection_velocity,
        checks=(Check("smooth_order", ">=", 0.8), Check("pulse_order", ">=", 0.5)),
        end_time=1.0, refine=True, options={"speed": 1.0, "pulse_floor": 0.5, "pulse_height": 1.0},
    )


def _vortex_domination() -> Scenario:
    g = Grid(64, 64, NOSLIP)
    return Scenario(
        name="vortex_domination",
        claim="domination rho, tau <= c_bar eta persists; mass of rho, eta conserved and tau mass decays exactly",
        kind=KINEMATIC, study="domination", grid=g,
        params=ModelParams(c_bar=2.0), transport=TransportConfig(cfl=0.4, splitting=LIE),
        momentum=MomentumConfig(), initial=_vortex_initial, velocity=stream_velocity,
        checks=(
            Check("min_margin", ">=", -1e-13),
            Check("mass_rho_drift", "<", 1e-12),
            Check("mass_eta_drift", "<", 1e-12),
            Check("tau_mass_error", "<", 1e-10),
            Check("renorm_square_s_tau", "<", 0.05),
            Check("renorm_xlogx_eta", "<", 0.05),
            Check("oracle_in_range", ">=", 1.0),
            Check("oracle_order", ">=", 0.5),
        ),
        n_steps=1000, keep_every=10, refine=True, options={"oracle_time": 0.0625},
        profiles={"eta": _vortex_eta, "s_rho": _vortex_s_rho, "s_tau": _vortex_s_tau},
    )


def _driven_noslip() -> Scenario:
    g = Grid(32, 32, NOSLIP)
    params = ModelParams(k=0.5, lam=0.5, mu_s=0.04, mu_b=0.01, c_bar=2.0)
    return Scenario(
        name="driven_noslip",
        claim="energy inequality residual of the coupled scheme vanishes under refinement",
        kind=DYNAMIC, study="energy_refinement", grid=g, params=params,
        transport=TransportConfig(cfl=0.4, splitting=STRANG),
        momentum=MomentumConfig(forcing="gravity", gravity=1.0),
        initial=_driven_initial,
        checks=(Check("residual_ratio", ">=", 1.3), Check("residual_order", ">=", 0.5)),
        end_time=0.25, dt=1e-3, refine=True,
    )


def _reduction_twin() -> Scenario:
    g = Grid(32, 32, PERIODIC)
    return Scenario(
        name="reduction_twin",
        claim="tau - k eta under the full relaxation source equals the damped reduced stress",
        kind=TWIN, study="reduction", grid=g, params=ModelParams(k=1.0),
        transport=TransportConfig(cfl=0.4, splitting=STRANG), momentum=MomentumConfig(),
        initial=_twin_initial, velocity=_twin_velocity,
        checks=(Check("reduction_sup_diff", "<", 1e-12),),
        n_steps=100,
    )


def _negative_pressure_sign() -> Scenario:
    g = Grid(128, 1, PERIODIC)
    return Scenario(
        name="negative_pressure_sign",
        claim="the stress enters the total pressure with a negative sign: a tau bump attracts, a q(eta) bump repels",
        kind=STATIC, study="pressure_sign", grid=g, params=ModelParams(dim=1),
        transport=TransportConfig(), momentum=MomentumConfig(),
        initial=_tau_bump_initial,
        checks=(Check("tau_toward_max", ">=", 1.0), Check("eta_away_from_max", ">=", 1.0)),
        n_steps=1, options={"flank": 0.08},
    )


PRESETS: Dict[str, Callable[[], Scenario]] = {
    "uniform_damping": _uniform_damping,
    "advection_periodic": _advection_periodic,
    "vortex_domination": _vortex_domination,
    "driven_noslip": _driven_noslip,
    "reduction_twin": _reduction_twin,
    "negative_pressure_sign": _negative_pressure_sign,
}


# ── overrides ──────────────────────────────────────────────────────────────

MODEL_KEYS = {"a": "a", "gamma": "gamma", "z": "z", "k": "k", "L": "L", "lambda": "lam",
              "mu_s": "mu_s", "mu_b": "mu_b", "c_bar": "c_bar", "r1_bar": "r1_bar",
              "r_bar": "r_bar"}
GRID_KEYS = ("nx", "ny", "bc", "lx", "ly")
SCENARIO_KEYS = ("end_time", "n_steps", "dt", "cfl", "splitting", "record_every")


def override_keys() -> Tuple[str, ...]:
    return (tuple(f"model.{k}" for k in MODEL_KEYS)
            + tuple(f"grid.{k}" for k in GRID_KEYS)
            + tuple(f"scenario.{k}" for k in SCENARIO_KEYS))


def _apply_overrides(sc: Scenario, overrides: Mapping[str, Any]) -> Scenario:
    unknown = sorted(set(overrides) - set(override_keys()))
    if unknown:
        raise ScenarioError(f"unknown override(s) {unknown} for scenario '{sc.name}'")

    model = {MODEL_KEYS[key.split(".", 1)[1]]: value
             for key, value in overrides.items() if key.startswith("model.")}
    grid = {key.split(".", 1)[1]: value for key, value in overrides.items() if key.startswith("grid.")}
    run = {key.split(".", 1)[1]: value for key, value in overrides.items() if key.startswith("scenario.")}

    g = sc.grid
    if grid:
        extent = (grid.pop("lx", g.extent[0]), grid.pop("ly", g.extent[1]))
        g = replace(g, extent=extent, **grid)
    params = replace(sc.params, dim=g.dim, **model)

    transport = sc.transport
    for key in ("cfl", "splitting"):
        if key in run:
            transport = replace(transport, **{key: run.pop(key)})

    # an end time replaces a preset step count and vice versa
    if "end_time" in run and "n_steps" not in run:
        run["n_steps"] = None
    if "n_steps" in run and "end_time" not in run:
        run["end_time"] = None
    return replace(sc, grid=g, params=params, transport=transport, **run)


def build(name: str, overrides: Optional[Mapping[str, Any]] = None) -> Scenario:
    """Fresh preset by name, with optional "section.key" overrides."""
    if name not in PRESETS:
        raise ScenarioError(f"unknown scenario '{name}', expected one of {sorted(PRESETS)}")
    sc = PRESETS[name]()
    if overrides:
        sc = _apply_overrides(sc, overrides)
        logger.info("scenario %s with overrides %s", name, dict(overrides))
    return sc
