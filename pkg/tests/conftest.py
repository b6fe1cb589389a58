import numpy as np
import pytest

from metastable.potentials import (
    chain_potential,
    double_well_1d,
    rotated_two_particle,
)


@pytest.fixture(scope="session")
def dw():
    return double_well_1d()


@pytest.fixture(scope="session")
def rotated_quadratic():
    """Two-particle chain in rotated coordinates, quadratic saddle regime."""
    return rotated_two_particle(0.75)


@pytest.fixture(scope="session")
def rotated_flat():
    """Two-particle chain at the critical coupling: quartic transverse direction."""
    return rotated_two_particle(0.5)


@pytest.fixture(scope="session")
def chain3_critical():
    """Three-particle chain at its critical coupling: codimension-two saddle."""
    return chain_potential(3, 2.0 / 3.0)


@pytest.fixture(scope="session")
def origin2():
    return np.zeros(2)
