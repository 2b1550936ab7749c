import numpy as np
import pytest

from rewardlab.environments import build_chain


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def chain3():
    """Three +1 arcs with probability 0.5, undiscounted"""
    return build_chain(3, 1.0, 0.5, 1.0)


@pytest.fixture
def chain5_plus5():
    return build_chain(5, 5.0, 0.5, 1.0)
