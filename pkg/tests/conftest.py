import numpy as np
import pytest

from prodhardy import build_psi


@pytest.fixture(scope="session")
def profile():
    return build_psi()


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
