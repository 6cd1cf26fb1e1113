from __future__ import annotations

import pytest

from qmaj import grids, states


@pytest.fixture(scope="session")
def half_grid() -> grids.GridSpec:
    return grids.default_grid(modes=1, hbar="half")


@pytest.fixture(scope="session")
def one_grid() -> grids.GridSpec:
    return grids.default_grid(modes=1, hbar="one")


@pytest.fixture(scope="session")
def fock(half_grid):
    """Rendered Fock Wigner functions |0>..|5> on the default grid."""
    return {n: states.render(states.Fock(n), half_grid) for n in range(6)}


@pytest.fixture(scope="session")
def vacuum_ref(half_grid):
    return states.reference(states.VACUUM, half_grid)


@pytest.fixture(scope="session")
def zoo(half_grid):
    """The recurring mixed bag of states used by property suites."""
    specs = {
        "fock0": "vacuum",
        "fock1": "fock:1",
        "fock4": "fock:4",
        "thermal04": "thermal(nbar=0.4)",
        "coherent": "coherent(alpha=1.2)",
        "cat2": "cat(alpha=2)",
        "on23": "on(a=2, n=3)",
        "lossy1": "lossy(eta=0.7, fock:1)",
        "rho1": "mix(0.75:cat(alpha=2), 0.25:fock:7)",
        "rho2": "mix(0.5:on(a=2,n=3), 0.5:fock:1)",
    }
    return {k: states.render(v, half_grid) for k, v in specs.items()}
