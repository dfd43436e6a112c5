import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ket0():
    return np.diag([1.0, 0.0]).astype(complex)


@pytest.fixture
def ket1():
    return np.diag([0.0, 1.0]).astype(complex)
