import numpy as np
import pytest

from oldroyd_fv.errors import IntegrityError
from oldroyd_fv.grid import NOSLIP, Grid, State, integral
from oldroyd_fv.model import ModelParams
from oldroyd_fv.oracle import (
    BOUNDS_COLUMNS,
    VelocityHistory,
    bounds_report,
    density_oracle,
    ratio_oracle,
    trace,
)
from oldroyd_fv.scenarios import stream_velocity
from oldroyd_fv.solver import TransportConfig, transport_substep


def uniform_flow(g, *components):
    return np.stack([np.full(g.shape, c) for c in components])


def test_history_rejects_bad_input(grid2d):
    u = grid2d.zeros_vector()
    with pytest.raises(IntegrityError):
        VelocityHistory(grid2d, [], [])
    with pytest.raises(IntegrityError):
        VelocityHistory(grid2d, [0.0, 1.0], [u])
    with pytest.raises(IntegrityError):
        VelocityHistory(grid2d, [1.0, 0.5], [u, u])
    with pytest.raises(IntegrityError):
        VelocityHistory(grid2d, [0.0], [np.zeros((2, 4, 4))])


def test_history_interpolates_in_time(grid2d):
    u0 = uniform_flow(grid2d, 1.0, 0.0)
    u1 = uniform_flow(grid2d, 3.0, 2.0)
    vh = VelocityHistory(grid2d, [0.0, 1.0], [u0, u1])
    assert np.allclose(vh.field_at(0.25), uniform_flow(grid2d, 1.5, 0.5))
    assert vh.t_end == 1.0 and not vh.is_steady
    with pytest.raises(IntegrityError):
        vh.divergence_integral(1.5)


def test_steady_history_has_no_end(grid2d):
    vh = VelocityHistory.steady(grid2d, uniform_flow(grid2d, 0.5, 0.5))
    assert vh.is_steady and vh.t_end == np.inf
    assert vh.divergence_integral(10.0) == 0.0


def test_trace_in_uniform_flow(grid2d):
    vh = VelocityHistory.steady(grid2d, uniform_flow(grid2d, 0.3, -0.2))
    end = trace(np.array([0.1, 0.5]), 0.0, 1.0, vh)
    assert np.allclose(end, [0.4, 0.3], atol=1e-12)
    wrapped = trace(np.array([0.9, 0.5]), 0.0, 1.0, vh)
    assert np.allclose(wrapped, [0.2, 0.3], atol=1e-12)


def test_trace_there_and_back():
    g = Grid(32, 32, NOSLIP)
    vh = VelocityHistory.steady(g, stream_velocity(g))
    x0 = np.array([[0.3, 0.4], [0.6, 0.7], [0.5, 0.2]])
    there = trace(x0, 0.0, 0.5, vh, cfl=0.1)
    assert np.all((there >= 0.0) & (there <= 1.0))
    assert np.max(np.abs(there - x0)) > 5e-2
    back = trace(there, 0.5, 0.0, vh, cfl=0.1)
    assert np.max(np.abs(back - x0)) < 5e-3


@pytest.mark.parametrize("damped", [False, True])
def test_ratio_oracle_translates_profile(damped, params):
    g = Grid(64)
    vh = VelocityHistory.steady(g, uniform_flow(g, 0.5))

    def s0(points):
        return 1.0 + 0.5 * np.sin(2 * np.pi * points[:, 0])

    t = 0.4
    x, _ = g.axes()
    expected = 1.0 + 0.5 * np.sin(2 * np.pi * (x - 0.5 * t))
    if damped:
        expected = expected * np.exp(-t / (2 * params.lam))
    out = ratio_oracle(s0, vh, t, damped, params)
    assert out.shape == g.shape
    assert np.allclose(out[0], expected, atol=1e-12)


def test_ratio_oracle_keeps_sampled_range(params, rng):
    g = Grid(32, 32, NOSLIP)
    vh = VelocityHistory.steady(g, stream_velocity(g))
    s0 = rng.uniform(0.5, 2.0, g.shape)
    out = ratio_oracle(s0, vh, 0.3, False, params)
    assert out.min() >= s0.min() and out.max() <= s0.max()


def test_density_oracle_in_divergence_free_flow(params):
    g = Grid(64)
    vh = VelocityHistory.steady(g, uniform_flow(g, -0.25))

    def f0(points):
        return 2.0 + np.cos(2 * np.pi * points[:, 0])

    x, _ = g.axes()
    out = density_oracle(f0, vh, 0.8, True, params)
    expected = (2.0 + np.cos(2 * np.pi * (x + 0.2))) * np.exp(-0.8 / (2 * params.lam))
    assert np.allclose(out[0], expected, atol=1e-12)


def test_density_oracle_conserves_mass_in_compressive_flow():
    p = ModelParams(dim=1)
    g = Grid(128)
    x, _ = g.axes()
    vh = VelocityHistory.steady(g, 0.2 * np.sin(2 * np.pi * x)[None, None])
    out = density_oracle(lambda points: np.ones(len(points)), vh, 0.5, False, p)
    assert out.max() > 1.05 and out.min() < 0.95
    assert integral(out, g) == pytest.approx(1.0, abs=1e-2)


def test_bounds_hold_at_rest(params, grid2d, make_state):
    s = make_state(grid2d)
    u = grid2d.zeros_vector()
    history = [s]
    for _ in range(10):
        s = transport_substep(s, u, 0.01, grid2d, TransportConfig(), params)
        history.append(s)
    report = bounds_report(history, VelocityHistory.steady(grid2d, u), params)
    assert len(report.rows) == 8 * len(history)
    assert report.worst_slack >= -1e-13
    assert {row.bound_kind for row in report.by_kind("zeta_lower")} == {"zeta_lower"}

    lines = report.to_csv().splitlines()
    assert lines[0].startswith("# div norm")
    assert lines[1] == ",".join(BOUNDS_COLUMNS)
    assert len(lines) == 2 + len(report.rows)


def test_bounds_hold_in_compressive_flow():
    p = ModelParams(dim=1)
    g = Grid(64, origin=(-0.5, 0.0))
    x, _ = g.axes()
    alpha = 1.0
    # u = -alpha x near the origin, expansive towards the ends of the period
    u = (-alpha / (2 * np.pi) * np.sin(2 * np.pi * x))[None, None]
    w = (1.5 - 0.5 * np.cos(2 * np.pi * x))[None]
    s = State.at_rest(g, w, w, 0.8 * w)
    history = [s]
    for _ in range(100):
        s = transport_substep(s, u, 0.005, g, TransportConfig(), p)
        history.append(s)
    report = bounds_report(history, VelocityHistory.steady(g, u), p)
    assert report.worst_slack >= 0.0

    rho_lower = report.by_kind("rho_lower")
    assert rho_lower[-1].t == pytest.approx(0.5)
    assert rho_lower[-1].rhs == pytest.approx(np.min(w) * np.exp(-alpha * 0.5), rel=5e-3)
    assert rho_lower[-1].lhs > rho_lower[0].lhs


def _rotation_error(cfl):
    g = Grid(32, 32, NOSLIP)
    X, Y = g.cell_centers()
    omega = 2 * np.pi
    vh = VelocityHistory.steady(g, omega * np.stack([-(Y - 0.5), X - 0.5]))
    x0 = np.array([[0.7, 0.5], [0.5, 0.3], [0.6, 0.62]])
    return np.max(np.abs(trace(x0, 0.0, 1.0, vh, cfl=cfl) - x0))


def test_solid_body_rotation_returns_after_a_period():
    coarse, fine = _rotation_error(0.4), _rotation_error(0.2)
    assert fine < 1e-8
    # fourth order in the substep
    assert coarse / fine > 12.0


def test_empty_history_has_no_rows(params, grid2d):
    report = bounds_report([], VelocityHistory.steady(grid2d, grid2d.zeros_vector()), params)
    assert report.rows == [] and report.worst_slack == np.inf
