import pytest
from hypothesis import settings

from gerstner_fplane import WaveParameters

settings.register_profile("numeric", deadline=None)
settings.load_profile("numeric")


@pytest.fixture
def params():
    """Canonical wave: k=1, omega=7.3e-5, g=9.8, rho=1000, p0=101325, b0=-0.1."""
    return WaveParameters()
