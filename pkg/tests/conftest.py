import pytest

from mcbounds import GridWorld, value_iteration


@pytest.fixture(scope="session")
def default_world():
    return GridWorld()


@pytest.fixture(scope="session")
def default_table(default_world):
    return value_iteration(default_world)
