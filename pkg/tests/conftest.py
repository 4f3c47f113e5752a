import numpy as np
import pytest

from corrminor.states import DensityMatrix

DIM_PAIRS = [(2, 2), (2, 3), (3, 2), (3, 3)]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def bell_state():
    psi = np.zeros(4)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    return DensityMatrix(2, 2, np.outer(psi, psi))
