import numpy as np
import pytest

from lptorus import Grid


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def grid32():
    return Grid(2, 32)


@pytest.fixture
def grid64():
    return Grid(2, 64)
