from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import erf

from qmaj import states
from qmaj.errors import ConfigError
from qmaj.grids import (
    GridSpec,
    SampledDistribution,
    default_grid,
    integrate,
    linear_combination,
    make_grid,
    truncation_report,
)


def test_tiny_grid_enumeration():
    spec = GridSpec(modes=1, half_width=1.0, points_per_axis=2)
    cells = make_grid(spec)
    assert cells.shape == (4, 2)
    expected = np.array([[-0.5, -0.5], [-0.5, 0.5], [0.5, -0.5], [0.5, 0.5]])
    np.testing.assert_allclose(cells, expected)
    assert spec.cell_measure == pytest.approx(1.0)


def test_grid_arithmetic():
    spec = GridSpec(modes=1, half_width=7.0, points_per_axis=700)
    assert spec.size == 490_000
    assert spec.cell_measure == pytest.approx(4e-4)
    two = GridSpec(modes=2, half_width=5.0, points_per_axis=64)
    assert two.size == 64**4
    assert two.cell_measure == pytest.approx((10 / 64) ** 4)


def test_grid_validation():
    with pytest.raises(ConfigError):
        GridSpec(points_per_axis=701)  # odd
    with pytest.raises(ConfigError):
        GridSpec(half_width=-1.0)
    with pytest.raises(ConfigError):
        GridSpec(modes=0)
    with pytest.raises(ConfigError):
        GridSpec(hbar="planck")


def test_enumeration_deterministic():
    spec = GridSpec(modes=1, half_width=3.0, points_per_axis=10)
    np.testing.assert_array_equal(make_grid(spec), make_grid(spec))


def test_integrate_vacuum(half_grid):
    f = states.render("vacuum", half_grid)
    assert integrate(f) == pytest.approx(1.0, abs=1e-6)


def test_integrate_zero(half_grid):
    zero = SampledDistribution(half_grid, np.zeros(half_grid.size))
    assert integrate(zero) == 0.0


def test_integrate_fock4(half_grid):
    f = states.render("fock:4", half_grid)
    assert integrate(f) == pytest.approx(1.0, abs=1e-4)


def test_integrate_linearity(half_grid):
    rng = np.random.default_rng(7)
    f = SampledDistribution(half_grid, rng.normal(size=half_grid.size))
    g = SampledDistribution(half_grid, rng.normal(size=half_grid.size))
    lhs = integrate(linear_combination([2.5, -0.7], [f, g]))
    rhs = 2.5 * integrate(f) - 0.7 * integrate(g)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_values_immutable(half_grid):
    f = states.render("vacuum", half_grid)
    with pytest.raises(ValueError):
        f.values[0] = 1.0


def test_truncation_vacuum_default(half_grid):
    rep = truncation_report(states.render("vacuum", half_grid))
    assert rep.boundary_max < 1e-40
    assert rep.normalization_defect < 1e-6


def _vacuum_on_window(L: float, N: int) -> SampledDistribution:
    spec = GridSpec(modes=1, half_width=L, points_per_axis=N)
    return states.render("vacuum", spec)


def test_truncation_tight_window():
    # mass of the hbar=1/2 vacuum inside the square [-L, L]^2 is erf(sqrt(2) L)^2
    rep = truncation_report(_vacuum_on_window(1.0, 200))
    exact_defect = 1.0 - erf(math.sqrt(2.0)) ** 2
    assert rep.normalization_defect == pytest.approx(exact_defect, abs=1e-3)
    # the disk-tail bound exp(-2 L^2) dominates the square-window defect
    assert rep.normalization_defect < math.exp(-2.0)


def test_truncation_defect_decreases_with_window():
    defects = [
        truncation_report(_vacuum_on_window(L, 300)).normalization_defect
        for L in (1.0, 2.0, 3.0)
    ]
    assert defects[0] > defects[1] > defects[2]
    assert defects[2] < 1e-6


def test_midpoint_richardson_ratio():
    # On a window tight enough that the boundary matters, halving the cell
    # size divides the quadrature error by about four (midpoint rule).  On
    # wide windows the error of an entire Gaussian is below double precision.
    exact = erf(math.sqrt(2.0)) ** 2
    err = {}
    for n in (40, 80):
        f = _vacuum_on_window(1.0, n)
        err[n] = abs(f.total_integral - exact)
    ratio = err[40] / err[80]
    assert 3.4 < ratio < 4.6


def test_default_grid_conventions():
    half = default_grid(hbar="half")
    one = default_grid(hbar="one")
    assert one.half_width == pytest.approx(half.half_width * math.sqrt(2.0))
    assert one.points_per_axis == half.points_per_axis
    with pytest.raises(ConfigError):
        default_grid(modes=3)


def test_renormalized(half_grid):
    f = SampledDistribution(half_grid, states.render("vacuum", half_grid).values * 0.5)
    g = f.renormalized()
    assert g.total_integral == pytest.approx(1.0, rel=1e-12)
