"""Tests for grids, fields and halo filling."""
import math

import numpy as np
import pytest

from cheb_jacobi.lib.const import AxisLayout
from cheb_jacobi.lib.exceptions import ConfigurationError, UsageError
from cheb_jacobi.lib.grid import (
    BoundaryCondition,
    Field,
    Grid,
    fill_ghosts,
    inf_norm_diff,
    remove_mean,
)

from .oracle import inf_norm_loop, smooth_boundary


def test_axis_layouts(dirichlet_grid, neumann_grid, mixed_grid):
    """Dirichlet axes are vertex-centred, any Neumann face makes an axis cell-centred."""
    assert dirichlet_grid.layouts == (AxisLayout.VERTEX, AxisLayout.VERTEX)
    assert dirichlet_grid.shape == (6, 6)
    assert dirichlet_grid.h == pytest.approx((1 / 7, 1 / 7))

    assert neumann_grid.layouts == (AxisLayout.CELL, AxisLayout.CELL)
    assert neumann_grid.shape == (8, 8)
    assert neumann_grid.h == (0.125, 0.125)
    assert neumann_grid.is_singular

    assert mixed_grid.layouts == (AxisLayout.VERTEX, AxisLayout.CELL)
    assert mixed_grid.shape == (6, 7)
    assert mixed_grid.zones == (7, 7)
    assert not mixed_grid.is_singular


def test_lowest_phase(dirichlet_grid, neumann_grid, mixed_grid):
    assert dirichlet_grid.lowest_phase(0) == pytest.approx(math.pi / 7)
    assert neumann_grid.lowest_phase(0) == pytest.approx(math.pi / 8)
    assert mixed_grid.lowest_phase(1) == pytest.approx(math.pi / 15)

    for grid in (dirichlet_grid, neumann_grid, mixed_grid):
        for axis in range(grid.dims):
            phases = grid.admissible_phases(axis)
            assert len(phases) == grid.shape[axis]
            assert min(phase for phase in phases if phase > 0) == pytest.approx(
                grid.lowest_phase(axis)
            )
            assert np.all(phases < math.pi)


def test_coordinates(dirichlet_grid, neumann_grid):
    assert dirichlet_grid.axis_coordinates(0) == pytest.approx(np.arange(1, 7) / 7)
    assert dirichlet_grid.axis_coordinates(0, ghost=1)[[0, -1]] == pytest.approx([0, 1])
    assert neumann_grid.axis_coordinates(1) == pytest.approx((np.arange(8) + 0.5) / 8)

    x, y = dirichlet_grid.coordinates(1)
    assert x.shape == (8, 8)
    assert np.all(x[:, 0] == x[:, 1])


def test_grid_validation():
    neumann = BoundaryCondition.neumann()

    with pytest.raises(ConfigurationError):
        Grid.uniform(2, 3, neumann)
    with pytest.raises(ConfigurationError):
        Grid(n=(8,), extent=(1.0,), faces=((neumann, neumann),))
    with pytest.raises(ConfigurationError):
        Grid.uniform(2, 8, neumann, extent=-1.0)
    with pytest.raises(ConfigurationError):
        Grid(n=(8, 8), extent=(1.0, 1.0), faces=((neumann, neumann),))


def test_boundary_condition_validation():
    with pytest.raises(ConfigurationError):
        BoundaryCondition(BoundaryCondition.dirichlet(smooth_boundary).kind)
    with pytest.raises(ConfigurationError):
        BoundaryCondition(BoundaryCondition.neumann().kind, smooth_boundary)


def test_fill_ghosts_dirichlet(dirichlet_grid, rng):
    """Ghosts hold the boundary function at the ghost coordinates."""
    u = Field.from_interior(dirichlet_grid, rng.standard_normal((6, 6)), ghost=2)
    fill_ghosts(u)

    x, y = dirichlet_grid.coordinates(2)
    expected = smooth_boundary(x, y)
    assert u.data[:2, :] == pytest.approx(expected[:2, :])
    assert u.data[-2:, :] == pytest.approx(expected[-2:, :])
    assert u.data[:, :2] == pytest.approx(expected[:, :2])
    # boundary nodes of a vertex-centred axis sit exactly on the face
    assert x[1, 2] == pytest.approx(0.0)


def test_fill_ghosts_neumann_mirror(neumann_grid, rng):
    values = rng.standard_normal((8, 8))
    u = Field.from_interior(neumann_grid, values, ghost=2)
    fill_ghosts(u)

    assert np.array_equal(u.data[1, 2:-2], values[0])
    assert np.array_equal(u.data[0, 2:-2], values[1])
    assert np.array_equal(u.data[-1, 2:-2], values[-2])
    assert np.array_equal(u.data[2:-2, 0], values[:, 1])
    assert u.data[0, 0] == values[1, 1]


def test_fill_ghosts_mixed_corner(mixed_grid, rng):
    """A Neumann mirror of a Dirichlet ghost row keeps the Dirichlet samples."""
    u = Field.from_interior(mixed_grid, rng.standard_normal(mixed_grid.shape))
    fill_ghosts(u)

    x, y = mixed_grid.coordinates(1)
    assert u.data[0, 0] == pytest.approx(smooth_boundary(x[0, 1], y[0, 1]))
    assert u.data[0, -1] == pytest.approx(smooth_boundary(x[0, -1], y[0, -1]))


def test_fill_ghosts_linear_field_by_hand():
    """u = x on 4x4 unknowns, Dirichlet u = x in x and Neumann in y."""
    grid = Grid(
        n=(6, 4),
        extent=(1.0, 1.0),
        faces=(
            (BoundaryCondition.dirichlet(lambda x, y: x),) * 2,
            (BoundaryCondition.neumann(),) * 2,
        ),
    )
    assert grid.shape == (4, 4)
    u = Field.from_function(grid, lambda x, y: x)
    fill_ghosts(u)

    # Dirichlet ghosts sit on x = 0 and x = 1, Neumann ghosts copy their row
    expected = np.repeat([[0.0], [0.2], [0.4], [0.6], [0.8], [1.0]], 6, axis=1)
    assert u.data == pytest.approx(expected, abs=1e-15)


def test_fill_ghosts_keeps_symmetry(neumann_grid, rng):
    values = rng.standard_normal((8, 8))
    u = Field.from_interior(neumann_grid, values + values.T, ghost=2)
    fill_ghosts(u)
    assert np.array_equal(u.data, u.data.T)

    values = rng.standard_normal((8, 8))
    u = Field.from_interior(neumann_grid, values + values[::-1], ghost=2)
    fill_ghosts(u)
    assert np.array_equal(u.data, u.data[::-1])


def test_fill_ghosts_idempotent(octant_grid, rng):
    u = Field.from_interior(octant_grid, rng.standard_normal(octant_grid.shape), 2)
    once = fill_ghosts(u).data.copy()
    assert np.array_equal(fill_ghosts(u).data, once)


def test_fill_ghosts_reach():
    grid = Grid.uniform(2, 8, BoundaryCondition.neumann())
    with pytest.raises(ConfigurationError):
        fill_ghosts(Field.zeros(grid, ghost=1), reach=2)


def test_field_validation(neumann_grid):
    with pytest.raises(UsageError):
        Field(grid=neumann_grid, data=np.zeros((8, 8)), ghost=1)
    with pytest.raises(ConfigurationError):
        Field(grid=neumann_grid, data=np.zeros((8, 8)), ghost=0)


def test_inf_norm_diff(neumann_grid, dirichlet_grid):
    u = Field.zeros(neumann_grid)
    v = Field.zeros(neumann_grid)
    v.values[3, 4] = -2.5
    assert inf_norm_diff(u, v) == 2.5

    with pytest.raises(UsageError):
        inf_norm_diff(u, Field.zeros(dirichlet_grid))


def test_inf_norm_diff_matches_loop(neumann_grid, rng):
    u = Field.from_interior(neumann_grid, rng.standard_normal((8, 8)))
    v = Field.from_interior(neumann_grid, rng.standard_normal((8, 8)))
    # halo content is ignored
    u.data[0, :] = 1e6

    assert inf_norm_diff(u, v) == inf_norm_loop(u.values, v.values)
    assert inf_norm_diff(u, v) == inf_norm_diff(v, u) > 0.0
    assert inf_norm_diff(u, u.copy()) == 0.0


def test_remove_mean(neumann_grid, rng):
    u = Field.from_interior(neumann_grid, 3.0 + rng.standard_normal((8, 8)))
    remove_mean(u)
    assert abs(np.mean(u.values)) < 1e-14
