import pytest

from ztl import with_precision


@pytest.fixture(scope="session")
def ctx50():
    return with_precision(50)


@pytest.fixture(scope="session")
def ctx30():
    return with_precision(30)
