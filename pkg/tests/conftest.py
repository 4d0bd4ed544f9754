import numpy as np
import pytest

from spin_rep import ParameterSet


@pytest.fixture(scope="session")
def params():
    return ParameterSet(q=0.3, kappa=0.35, zeta=0.2 + 0.1j, zeta_p=-0.15,
                        upsilon=0.4, upsilon_p=0.25j, xi=0.55, n=2)


@pytest.fixture(scope="session")
def params3(params):
    return params.with_rank(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
