import pytest

from spotit.plane import generate_plane
from spotit.solver import solve


@pytest.fixture(scope="session")
def deck3():
    return generate_plane(3)


@pytest.fixture(scope="session")
def deck5():
    return generate_plane(5)


@pytest.fixture(scope="session")
def deck7():
    return generate_plane(7)


@pytest.fixture(scope="session")
def solved3(deck3):
    grid, _, _ = solve(deck3)
    return grid


@pytest.fixture(scope="session")
def solved7(deck7):
    grid, _, _ = solve(deck7)
    return grid
