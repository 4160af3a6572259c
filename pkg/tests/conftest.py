import pytest

from qbmzeno.spectral import ReservoirParams


@pytest.fixture
def params_hot():
    """High-temperature reference point: theta=100, r=0.5, alpha=0.1."""
    return ReservoirParams(r=0.5, theta=100.0, alpha=0.1)


@pytest.fixture
def model_hot(params_hot):
    return params_hot.spectral_model()


@pytest.fixture
def params_cold():
    """Zero-temperature reference point: theta=0, r=10, alpha=0.1."""
    return ReservoirParams(r=10.0, theta=0.0, alpha=0.1)


@pytest.fixture
def model_cold(params_cold):
    return params_cold.spectral_model()
