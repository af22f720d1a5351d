import pytest

from core.flux import cubic_flux, quadratic_entropy
from core.kinetic import linear_kinetic


@pytest.fixture(scope="session")
def cubic():
    return cubic_flux()


@pytest.fixture(scope="session")
def pair(cubic):
    return quadratic_entropy(cubic)


@pytest.fixture(scope="session")
def kin(pair):
    return linear_kinetic(pair, 0.75)
