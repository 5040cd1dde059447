import numpy as np
import pytest

from oldroyd_fv.errors import DomainError, ParameterError
from oldroyd_fv.model import (
    ModelParams,
    ThermoSample,
    audit_energy_coercivity,
    audit_small_density_bound,
    auto_select_radii,
    compute_shift,
    cutoff_chi,
    fluid_energy,
    fluid_pressure,
    gibbs_residual,
    gibbs_residual_numeric,
    helmholtz,
    helmholtz_from_integral,
    integral_gauge,
    newtonian_stress,
    polymer_energy,
    polymer_pressure,
    positivity_radius,
    pressure_decomposition,
    ratios,
    reduce_tau,
    shifted_helmholtz,
    stress_contraction,
    total_pressure,
)
from oldroyd_fv.model.decomposition import monotone_part_is_monotone


# ── parameters ─────────────────────────────────────────────────────────────

@pytest.mark.parametrize("changes", [
    {"a": 0.0}, {"z": -1.0}, {"lam": 0.0}, {"mu_s": 0.0}, {"mu_b": -0.1},
    {"k": -1.0}, {"L": -0.5}, {"gamma": 2.5}, {"gamma": 0.0}, {"c_bar": 0.0},
    {"r1_bar": 1.0}, {"r1_bar": 20.0, "r_bar": 16.0}, {"dim": 3},
])
def test_invalid_params_rejected(changes):
    with pytest.raises(ParameterError):
        ModelParams(**changes)


def test_polymer_slope():
    assert ModelParams(k=2.0, L=0.25).polymer_slope == pytest.approx(-1.5)


def test_admissibility():
    p = ModelParams(c_bar=2.0)
    s = ThermoSample(eta=np.array([1.0, 1.0, 1.0]), rho=np.array([2.0, 2.5, 1.0]),
                     tau=np.array([0.5, 0.5, 2.1]))
    assert s.is_admissible(p).tolist() == [True, False, False]


# ── pressures and energies ─────────────────────────────────────────────────

def test_fluid_pressure_known_values():
    assert fluid_pressure(3.0, ModelParams(a=1, gamma=2)) == 9.0
    assert fluid_pressure(0.0, ModelParams()) == 0.0
    assert fluid_pressure(5.0, ModelParams(a=2, gamma=1)) == 10.0


def test_polymer_pressure_known_values():
    assert polymer_pressure(3.0, ModelParams(k=2, L=1, z=1)) == 9.0
    assert polymer_pressure(2.0, ModelParams(k=1, L=3, z=0.5)) == pytest.approx(6.0)
    assert polymer_pressure(0.0, ModelParams()) == 0.0


def test_polymer_pressure_negative_for_short_chains():
    assert polymer_pressure(0.1, ModelParams(k=1, L=0.5, z=1)) < 0


def test_total_pressure_known_values():
    p = ModelParams(a=1, gamma=2, z=1, k=0)
    assert total_pressure(ThermoSample(1.0, 1.0, 1.0), p) == 1.0
    assert total_pressure(ThermoSample(0.0, 0.0, 0.0), p) == 0.0
    assert total_pressure(ThermoSample(0.0, 0.0, 2.0), p) == -2.0


@pytest.mark.parametrize("fn", [fluid_pressure, polymer_pressure, fluid_energy, polymer_energy])
def test_negative_density_is_domain_error(fn):
    with pytest.raises(DomainError):
        fn(-1.0, ModelParams())


def test_energy_known_values():
    assert fluid_energy(1.0, ModelParams(a=1, gamma=2)) == 1.0
    assert fluid_energy(1.0, ModelParams(a=3, gamma=1)) == 0.0
    assert fluid_energy(0.0, ModelParams(gamma=1)) == 0.0
    assert polymer_energy(1.0, ModelParams(z=1)) == 1.0
    assert polymer_energy(0.0, ModelParams()) == 0.0
    assert polymer_energy(np.e, ModelParams(z=1e-300, k=1, L=2)) == pytest.approx(np.e)


def test_helmholtz_known_values():
    p = ModelParams(a=1, gamma=2, z=1, k=0)
    assert helmholtz(ThermoSample(1.0, 1.0, 1.0), p) == 2.0
    assert helmholtz(ThermoSample(0.0, 0.0, 0.0), p) == 0.0
    assert helmholtz(ThermoSample(1.0, 0.0, np.e), p) == pytest.approx(1.0 - np.e)


def test_array_inputs_keep_shape(params, rng):
    eta = rng.uniform(0.1, 2.0, (4, 5))
    s = ThermoSample.from_ratios(eta, 0.5, 0.5)
    assert np.shape(helmholtz(s, params)) == (4, 5)
    assert np.shape(total_pressure(s, params)) == (4, 5)


# ── Gibbs relation ─────────────────────────────────────────────────────────

@pytest.mark.parametrize("gamma", [0.5, 1.0, 1.4, 2.0])
def test_gibbs_identity_on_random_samples(gamma, rng, sample_admissible):
    p = ModelParams(gamma=gamma)
    s = sample_admissible(rng, p, 100_000)
    assert np.max(np.abs(gibbs_residual(s, p))) < 1e-10


def test_gibbs_known_values():
    assert abs(gibbs_residual(ThermoSample(1.0, 1.0, 1.0), ModelParams())) < 1e-12
    assert abs(gibbs_residual(ThermoSample(2.0, 0.5, 0.3), ModelParams(gamma=1.0))) < 1e-12


def test_gibbs_needs_interior_samples(params):
    with pytest.raises(DomainError):
        gibbs_residual(ThermoSample(1.0, 0.0, 1.0), params)


def test_numeric_gibbs_matches_closed_form(params, rng, sample_admissible):
    s = sample_admissible(rng, params, 200, eta_max=3.0)
    assert np.max(np.abs(gibbs_residual_numeric(s, params))) < 1e-5


@pytest.mark.parametrize("gamma", [1.0, 1.4])
def test_integral_formula_solves_gibbs_equation(gamma, rng):
    p = ModelParams(gamma=gamma)
    eta = rng.uniform(0.5, 3.0, 50)
    s = ThermoSample.from_ratios(eta, rng.uniform(0.2, 2.0, 50), rng.uniform(0.2, 2.0, 50))
    residual = gibbs_residual_numeric(s, p, energy=lambda t, q: helmholtz_from_integral(t, q, 64))
    assert np.max(np.abs(residual)) < 1e-5


@pytest.mark.parametrize("gamma", [0.5, 1.0, 1.4, 2.0])
def test_integral_formula_differs_by_degree_one_gauge(gamma, rng):
    p = ModelParams(gamma=gamma)
    eta = rng.uniform(0.05, 5.0, 200)
    s_rho = rng.uniform(0.0, 2.0, 200)
    s_tau = rng.uniform(0.0, 2.0, 200)
    s = ThermoSample.from_ratios(eta, s_rho, s_tau)
    gap = helmholtz_from_integral(s, p, n_quad=128) - helmholtz(s, p)
    expected = eta * integral_gauge(s_rho, s_tau, p)
    assert np.max(np.abs(gap - expected)) < 1e-6


def test_integral_formula_normalisation(params):
    assert helmholtz_from_integral(ThermoSample(0.0, 0.0, 0.0), params) == 0.0
    with pytest.raises(ParameterError):
        helmholtz_from_integral(ThermoSample(1.0, 1.0, 1.0), params, n_quad=8)


# ── shift ──────────────────────────────────────────────────────────────────

def test_shift_at_least_one_when_energy_vanishes_at_origin():
    p = ModelParams(k=0.0, z=1.0, a=1.0, gamma=2.0, c_bar=1.0)
    assert compute_shift(p) >= 1.0


def test_shifted_energy_positive(params, rng, sample_admissible):
    r2 = positivity_radius(params)
    c_under = compute_shift(params, r2=r2)
    s = sample_admissible(rng, params, 100_000, eta_max=3.0 * r2 + 5.0, strict=False)
    values = np.asarray(shifted_helmholtz(s, params, c_under))
    assert np.all(values > 0)
    inside = np.asarray(s.eta) <= r2
    assert np.min(values[inside]) >= 1.0 - 1e-12
    outside = np.asarray(s.eta) >= r2 * 1.01
    assert np.all(np.asarray(helmholtz(s, params))[outside] > 0)


def test_shift_resolution_study(params):
    r2 = positivity_radius(params)
    coarse = compute_shift(params, n_scan=100, r2=r2)
    fine = compute_shift(params, n_scan=200, r2=r2)
    assert abs(coarse - fine) / fine < 0.01


def test_shifted_known_values(params):
    assert shifted_helmholtz(ThermoSample(0.0, 0.0, 0.0), params, 5.0) == 5.0


# ── decomposition ──────────────────────────────────────────────────────────

def test_cutoff_values():
    p = ModelParams(r1_bar=8.0, r_bar=16.0)
    assert cutoff_chi(8.0, p) == 1.0
    assert cutoff_chi(16.0, p) == 0.0
    assert cutoff_chi(12.0, p) == pytest.approx(0.5)
    assert cutoff_chi(0.0, p) == 1.0
    scan = cutoff_chi(np.linspace(0.0, 20.0, 10_000), p)
    assert np.all(np.diff(scan) <= 0)


def test_decomposition_identity(params, rng, sample_admissible):
    s = sample_admissible(rng, params, 100_000, strict=False)
    eta, rho, tau = s.components()
    s_rho, s_tau = ratios(s)
    mono, comp = pressure_decomposition(eta, s_rho, s_tau, params)
    h = ThermoSample.from_ratios(eta, s_rho, s_tau)
    assert np.max(np.abs(mono - comp - total_pressure(h, params))) < 1e-12


def test_compact_part_support_and_bound(params, rng):
    eta = rng.uniform(0.0, 3.0 * params.r_bar, 10_000)
    s = rng.uniform(0.0, params.c_bar, (2, 10_000))
    _, comp = pressure_decomposition(eta, s[0], s[1], params)
    assert np.all(comp[eta >= params.r_bar] == 0.0)
    assert np.all(comp >= 0.0)
    assert np.all(comp <= (params.k + params.c_bar) * params.r_bar)


def test_decomposition_rejects_ratios_outside_range(params):
    with pytest.raises(DomainError):
        pressure_decomposition(1.0, params.c_bar + 0.1, 0.0, params)


def test_auto_selected_radii_give_monotone_part(params):
    p = auto_select_radii(params)
    assert p.r_bar == 2.0 * p.r1_bar
    assert np.log2(p.r1_bar) == int(np.log2(p.r1_bar))
    assert monotone_part_is_monotone(p, n_eta=400, n_ratio=20, tol=1e-10)

    eta = np.linspace(0.0, 2.0 * p.r_bar, 400)[:, None, None]
    s = np.linspace(0.0, p.c_bar, 20)
    mono, _ = pressure_decomposition(eta, s[None, :, None], s[None, None, :], p)
    assert np.min(np.diff(mono, axis=0)) >= -1e-10


def test_small_radius_is_not_monotone():
    # the cutoff is too steep next to the stress term at R1 = 2
    p = ModelParams(r1_bar=2.0, r_bar=4.0)
    assert not monotone_part_is_monotone(p)


# ── stress, ratios, reduction ──────────────────────────────────────────────

def test_stress_known_values():
    p = ModelParams(mu_s=0.3, mu_b=0.2)
    assert np.all(newtonian_stress(np.zeros((2, 2)), p) == 0.0)
    alpha = 0.7
    S = newtonian_stress(alpha * np.eye(2), p)
    assert np.allclose(S, 2.0 * p.mu_b * alpha * np.eye(2))
    assert stress_contraction(alpha * np.eye(2), p) == pytest.approx(4.0 * p.mu_b * alpha ** 2)


def test_stress_symmetric_trace_and_dissipative(params, rng):
    G = rng.normal(size=(10_000, 2, 2))
    S = newtonian_stress(G, params)
    assert np.allclose(S, np.swapaxes(S, -1, -2))
    div = np.trace(G, axis1=-2, axis2=-1)
    assert np.allclose(np.trace(S, axis1=-2, axis2=-1), 2.0 * params.mu_b * div)
    assert np.min(stress_contraction(G, params)) >= -1e-14


def test_reduce_tau_known_values():
    p = ModelParams(k=2.0)
    assert reduce_tau(5.0, 2.0, p) == 1.0
    assert reduce_tau(2.0 * 1.5, 1.5, p) == 0.0
    # no clamping
    assert reduce_tau(1.0, 1.0, p) == -1.0


def test_ratio_known_values(params, rng, sample_admissible):
    assert ratios(ThermoSample(2.0, 1.0, 4.0)) == (0.5, 2.0)
    assert ratios(ThermoSample(0.0, 0.0, 0.0)) == (0.0, 0.0)
    s = sample_admissible(rng, params, 10_000)
    s_rho, s_tau = ratios(s)
    for r in (s_rho, s_tau):
        assert np.all((r >= 0) & (r <= params.c_bar * (1 + 1e-15)))


def test_reconstruction_from_ratios(params, rng, sample_admissible):
    s = sample_admissible(rng, params, 1000)
    s_rho, s_tau = ratios(s)
    back = ThermoSample.from_ratios(s.eta, s_rho, s_tau)
    assert np.allclose(back.rho, s.rho, rtol=1e-15, atol=0)
    assert np.allclose(back.tau, s.tau, rtol=1e-15, atol=0)


# ── audits ─────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("gamma", [0.5, 1.4])
def test_small_density_audit(gamma):
    result = audit_small_density_bound(ModelParams(gamma=gamma))
    assert result["alpha"] == min(1.0, gamma)
    assert result["constant"] > 0
    assert result["alpha_fit"] > 0


def test_energy_coercivity_audit(params):
    r2 = positivity_radius(params)
    c_under = compute_shift(params, n_scan=60, r2=r2)
    assert audit_energy_coercivity(params, c_under, eta_max=3.0 * r2) > 0
