import numpy as np
import pytest

from casimir_decoherence import PhysicalConfig


@pytest.fixture
def cfg():
    """Internal units hbar = M = omega0 = 1, perfect-mirror regime."""
    return PhysicalConfig(transparency_frequency=1e4)


@pytest.fixture
def cfg_unit():
    """Omega = omega0 = 1."""
    return PhysicalConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
