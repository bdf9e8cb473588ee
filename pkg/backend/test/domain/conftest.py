import pytest

import hvi.domain as d


@pytest.fixture
def eps():
    return 0.1


@pytest.fixture
def forcing_at_threshold():
    """Forcing on the maximum-mechanism boundary of xi = 1 at sigma = 1."""
    return d.ScaledForcing(eps=0.1, f=1.6637, sigma=1.0)


@pytest.fixture
def forcing_saddle():
    """Forcing on the saddle-mechanism boundary at sigma = 1.5."""
    return d.ScaledForcing(eps=0.1, f=1.5, sigma=1.5)


@pytest.fixture(scope="module")
def free_trajectory():
    """Unforced motion at E = 2, far inside the impact regime."""
    cfg = d.SimConfig(F=0.0, Omega=1.0, q0=0.0, p0=2.0, horizon=60.0)
    return cfg, d.simulate(cfg)


@pytest.fixture(scope="module")
def forced_trajectory():
    cfg = d.SimConfig(F=0.17, Omega=1.1, horizon=200.0)
    return cfg, d.simulate(cfg)
