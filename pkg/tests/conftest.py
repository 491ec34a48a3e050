import pytest

from kernelur.grid import Gaussian, Grid, Hermite, sample


@pytest.fixture(scope="session")
def grid():
    return Grid(1024, 10.0)


@pytest.fixture(scope="session")
def fine_grid():
    return Grid(2048, 12.0)


@pytest.fixture(scope="session")
def psi(grid):
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = sample(Hermite(n), grid)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def lattice_signals(grid):
    """The four signals of the property lattice."""
    return {
        "psi0": sample(Hermite(0), grid),
        "psi0+psi1": sample(Hermite((0, 1)), grid),
        "chirped": sample(Gaussian(chirp=1.0), grid),
        "shifted": sample(Gaussian(mu=1.0), grid),
    }
