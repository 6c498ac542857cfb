import pytest

from bivekua.domain import Domain, build_grid


@pytest.fixture(scope="session")
def disk64():
    return build_grid(Domain.disk(), 64)


@pytest.fixture(scope="session")
def disk32():
    return build_grid(Domain.disk(), 32)


@pytest.fixture(scope="session")
def small64():
    return build_grid(Domain.disk(0j, 0.8), 64)
