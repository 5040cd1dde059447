import numpy as np
import pytest

from oldroyd_fv.diagnostics import kinetic_energy
from oldroyd_fv.errors import DivergenceError, ParameterError, StepSizeError
from oldroyd_fv.grid import NOSLIP, Grid, State, velocity_from_momentum
from oldroyd_fv.model import ModelParams
from oldroyd_fv.solver import (
    MomentumConfig,
    TransportConfig,
    advance,
    advance_kinematic,
    balance_forcing,
    dissipation_density,
    momentum_step,
    sound_speed,
    stable_dt,
    stable_dt_limits,
    transport_substep,
    viscous_dt,
    viscous_force,
)


def uniform_state(g, rho=1.0, eta=1.5, tau=0.8):
    ones = np.ones(g.shape)
    return State.at_rest(g, rho * ones, eta * ones, tau * ones)


def test_uniform_rest_state_stays_at_rest(params, grid2d):
    s = uniform_state(grid2d)
    mom = momentum_step(s, 1e-3, grid2d, params, MomentumConfig())
    assert np.all(mom == 0.0)


def test_gravity_accelerates_uniform_column(params, box2d):
    s = uniform_state(box2d, rho=2.0)
    mc = MomentumConfig(forcing="gravity", gravity=9.81)
    dt = 1e-4
    mom = momentum_step(s, dt, box2d, params, mc)
    assert np.all(mom[0] == 0.0)
    assert np.allclose(mom[1], -dt * 2.0 * 9.81, rtol=1e-14)


def test_balance_forcing_holds_stratified_state(params, make_state):
    g = Grid(16, 16, NOSLIP)
    s = make_state(g)
    mc = MomentumConfig(forcing="manufactured", forcing_field=balance_forcing(s, params))
    mom = momentum_step(s, 1e-4, g, params, mc)
    assert np.max(np.abs(mom)) < 1e-12


def test_hydrostatic_column_1d_stays_at_rest():
    g = Grid(32, bc=NOSLIP)
    p = ModelParams(dim=1, gamma=1.0)
    x, _ = g.axes()
    # p(rho) = a rho is linear, so h is linear in x
    rho = (1.0 + 0.5 * x)[None]
    ones = np.ones(g.shape)
    s = State.at_rest(g, rho, 2.0 * ones, 1.0 * ones)
    mc = MomentumConfig(forcing="manufactured", forcing_field=balance_forcing(s, p))
    for _ in range(20):
        s = advance(s, 1e-3, p, TransportConfig(), mc)
    assert np.max(np.abs(s.mom)) < 1e-14
    assert np.allclose(s.rho, rho, rtol=0, atol=1e-14)


def test_viscous_force_one_dimensional(grid1d):
    p = ModelParams(dim=1, mu_b=0.3)
    x, _ = grid1d.axes()
    u = np.sin(2 * np.pi * x)[None, None]
    force = viscous_force(u, grid1d, p)
    h = grid1d.dx
    expected = p.mu_b * (np.roll(u[0, 0], -1) - 2 * u[0, 0] + np.roll(u[0, 0], 1)) / h ** 2
    assert np.allclose(force[0, 0], expected, atol=1e-10)


def test_viscous_force_of_shear_flow(params, grid2d):
    X, Y = grid2d.cell_centers()
    u = np.stack([np.sin(2 * np.pi * Y), np.zeros(grid2d.shape)])
    force = viscous_force(u, grid2d, params)
    exact = -0.5 * params.mu_s * (2 * np.pi) ** 2 * np.sin(2 * np.pi * Y)
    assert np.max(np.abs(force[0] - exact)) < 0.05 * np.max(np.abs(exact))
    assert np.allclose(force[1], 0.0, atol=1e-12)


def test_dissipation_is_non_negative(params, grid2d, rng):
    u = rng.normal(size=grid2d.vector_shape)
    assert np.min(dissipation_density(u, grid2d, params)) >= -1e-12


def test_sound_speed_of_uniform_state(params, grid2d):
    s = uniform_state(grid2d)
    c2 = (params.a * params.gamma + 2 * params.z * 1.5 ** 2 + params.polymer_slope * 1.5 - 0.8)
    assert np.allclose(sound_speed(s, params), np.sqrt(c2))


def test_stable_dt_is_smallest_limit(params, grid2d, make_state):
    s = make_state(grid2d, velocity=np.ones(grid2d.vector_shape))
    mc = MomentumConfig()
    limits = stable_dt_limits(s, grid2d, params, mc)
    assert set(limits) == {"advective", "viscous", "source", "max", "acoustic"}
    assert stable_dt(s, grid2d, params, mc) == min(limits.values())
    assert limits["viscous"] == viscous_dt(s, grid2d, params, mc)


def test_viscous_limit_enforced(params, grid2d):
    s = uniform_state(grid2d)
    mc = MomentumConfig()
    with pytest.raises(StepSizeError):
        momentum_step(s, 2.0 * viscous_dt(s, grid2d, params, mc), grid2d, params, mc)


def test_non_finite_term_is_named(params, grid2d):
    s = uniform_state(grid2d)
    s.tau[3, 3] = np.nan
    with pytest.raises(DivergenceError) as info:
        momentum_step(s, 1e-4, grid2d, params, MomentumConfig())
    assert info.value.term == "pressure gradient"


@pytest.mark.parametrize("kwargs", [{"visc_cfl": 0.0}, {"visc_cfl": 0.8},
                                    {"forcing": "coriolis"}, {"forcing": "manufactured"}])
def test_invalid_momentum_config(kwargs):
    with pytest.raises(ParameterError):
        MomentumConfig(**kwargs)


def test_advance_damps_and_keeps_rest(params, grid2d):
    s = uniform_state(grid2d)
    out = advance(s, 1e-3, params, TransportConfig(), MomentumConfig())
    assert np.all(out.mom == 0.0)
    assert np.allclose(out.tau, 0.8 * np.exp(-1e-3 / (2 * params.lam)), rtol=1e-14)
    assert out.time == pytest.approx(1e-3)


def test_advance_uses_transported_densities(params, make_state):
    g = Grid(16, 16)
    X, Y = g.cell_centers()
    u = 0.2 * np.stack([np.sin(2 * np.pi * Y), np.cos(2 * np.pi * X)])
    s = make_state(g, velocity=u)
    tc, mc = TransportConfig(), MomentumConfig()
    dt = 0.5 * stable_dt(s, g, params, mc, tc)
    out = advance(s, dt, params, tc, mc)
    mid = transport_substep(s, velocity_from_momentum(s), dt, g, tc, params)
    assert np.array_equal(out.rho, mid.rho)
    assert np.array_equal(out.mom, momentum_step(mid, dt, g, params, mc))


def test_advance_kinematic_sets_momentum(params, grid2d, make_state):
    u = 0.1 * np.ones(grid2d.vector_shape)
    s = make_state(grid2d, velocity=u)
    out = advance_kinematic(s, u, 1e-3, params, TransportConfig())
    assert np.allclose(out.mom, out.rho * u)


def test_total_momentum_conserved_on_periodic_grid(params, make_state):
    g = Grid(32, 32)
    X, Y = g.cell_centers()
    u = np.stack([0.2 + 0.3 * np.sin(2 * np.pi * Y), 0.3 * np.cos(2 * np.pi * X)])
    s = make_state(g, velocity=u)
    mc, tc = MomentumConfig(), TransportConfig()
    total0 = s.mom.sum(axis=(1, 2))
    for _ in range(30):
        s = advance(s, stable_dt(s, g, params, mc, tc), params, tc, mc)
    assert np.allclose(s.mom.sum(axis=(1, 2)), total0, rtol=0, atol=1e-11)
    assert abs(total0[0]) > 1.0


def test_taylor_green_kinetic_energy_decays_every_step(params):
    g = Grid(32, 32)
    X, Y = g.cell_centers()
    u = 0.1 * np.stack([np.sin(2 * np.pi * X) * np.cos(2 * np.pi * Y),
                        -np.cos(2 * np.pi * X) * np.sin(2 * np.pi * Y)])
    ones = np.ones(g.shape)
    s = State(g, ones, ones, 0.0 * ones, u)
    mc, tc = MomentumConfig(), TransportConfig()
    energies = [kinetic_energy(s)]
    for _ in range(50):
        s = advance(s, stable_dt(s, g, params, mc, tc), params, tc, mc)
        energies.append(kinetic_energy(s))
    assert np.all(np.diff(energies) < 0)
    assert energies[-1] < 0.9 * energies[0]
