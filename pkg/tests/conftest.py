import numpy as np
import pytest

from oldroyd_fv.grid import Grid, State
from oldroyd_fv.model import ModelParams, ThermoSample


@pytest.fixture
def params():
    return ModelParams()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def grid2d():
    return Grid(16, 16)


@pytest.fixture
def box2d():
    return Grid(16, 16, "noslip_box")


@pytest.fixture
def grid1d():
    return Grid(32)


def admissible_samples(rng, p, n, eta_max=10.0, strict=True):
    """n random admissible (eta, rho, tau) samples with eta in (0, eta_max]."""
    low = 1e-3 if strict else 0.0
    eta = rng.uniform(low, eta_max, n)
    s_rho = rng.uniform(low, p.c_bar, n)
    s_tau = rng.uniform(low, p.c_bar, n)
    return ThermoSample.from_ratios(eta, s_rho, s_tau)


def smooth_state(g, velocity=None, seed=0):
    """Positive, dominated state with smooth random-phase bumps."""
    X, Y = g.cell_centers()
    phase = np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, 3)
    eta = 2.0 + 0.5 * np.sin(2 * np.pi * X + phase[0]) * np.cos(2 * np.pi * Y)
    rho = eta * (1.0 + 0.3 * np.sin(2 * np.pi * Y + phase[1]))
    tau = eta * (0.8 + 0.3 * np.cos(2 * np.pi * X + phase[2]))
    mom = g.zeros_vector() if velocity is None else rho * velocity
    return State(g, rho, eta, tau, mom)


@pytest.fixture
def sample_admissible():
    return admissible_samples


@pytest.fixture
def make_state():
    return smooth_state
