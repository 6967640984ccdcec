import numpy as np
import pytest

from sl4zeta.logint import li_inverse
from sl4zeta.spectrum import generate_pnt_like

SEED = 20261019


@pytest.fixture(scope="session")
def big_weyl():
    """The desk-scale spectrum: ⌊2 li(10^6)⌋ classes with Weyl-distributed angles."""
    return generate_pnt_like(1e6, SEED, 2.0, "weyl")


@pytest.fixture(scope="session")
def ten_k():
    """Exactly 10^4 classes."""
    x = float(li_inverse(np.array([1e4 / 2]))[0]) * (1 + 1e-12)
    return generate_pnt_like(x, SEED, 2.0, "weyl")


@pytest.fixture(scope="session")
def small_weyl():
    return generate_pnt_like(3000.0, 5, 2.0, "weyl")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
