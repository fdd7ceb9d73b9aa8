import pytest

from faultpath.families import random_connected


@pytest.fixture
def g_small():
    return random_connected(12, seed=3)


@pytest.fixture
def g_mid():
    return random_connected(20, seed=11)
