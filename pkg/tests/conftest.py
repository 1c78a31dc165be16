import pytest

from thermofield.spaces import build_space


@pytest.fixture(scope="session")
def ops20():
    return build_space(20, 3)


@pytest.fixture(scope="session")
def ops30():
    return build_space(30, 3)
