import numpy as np
import pytest

from dtcsim import DisorderDistribution, FloquetDriveSpec


@pytest.fixture
def showcase_distribution():
    """Charge-noise-stabilized parameter set used throughout the suite."""
    return DisorderDistribution(J0=5.0, sigma_J=3.0, h0=2.0e4, sigma_h=50.0)


@pytest.fixture
def showcase_spec(showcase_distribution):
    return FloquetDriveSpec(L=4, epsilon=0.04, distribution=showcase_distribution)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
