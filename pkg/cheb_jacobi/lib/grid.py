"""Uniform Cartesian grids, scalar fields with a ghost halo and boundary handling.

Each axis is laid out according to its pair of faces:

* an axis with at least one homogeneous Neumann face is cell-centred
  (``h = extent / n``, ``n`` unknowns) and Neumann ghosts mirror the cells next
  to the face;
* an all-Dirichlet axis is vertex-centred (``h = extent / (n - 1)``, ``n``
  nodes including the two boundary nodes, ``n - 2`` unknowns).

Dirichlet ghosts always hold the boundary function sampled at the exact ghost
coordinate, which for a vertex-centred axis is the face node itself.
"""
from dataclasses import dataclass
from functools import lru_cache
import math
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .const import AxisLayout, BoundaryKind
from .exceptions import ConfigurationError, UsageError

BoundaryFunction = Callable[..., Union[float, np.ndarray]]
Slab = Tuple[slice, ...]


@dataclass(frozen=True)
class BoundaryCondition:
    kind: BoundaryKind
    value: Optional[BoundaryFunction] = None

    def __post_init__(self):
        if self.kind == BoundaryKind.DIRICHLET and self.value is None:
            raise ConfigurationError("Dirichlet faces need a boundary-value function")
        if self.kind == BoundaryKind.NEUMANN and self.value is not None:
            raise ConfigurationError(
                "Only homogeneous Neumann faces are supported; got a value function"
            )

    @classmethod
    def dirichlet(cls, value: BoundaryFunction):
        return cls(BoundaryKind.DIRICHLET, value)

    @classmethod
    def neumann(cls):
        return cls(BoundaryKind.NEUMANN)

    @property
    def is_neumann(self) -> bool:
        return self.kind == BoundaryKind.NEUMANN


FacePair = Tuple[BoundaryCondition, BoundaryCondition]


@dataclass(frozen=True)
class Grid:
    """Descriptor of a uniform 2D or 3D mesh and its boundary faces."""

    n: Tuple[int, ...]
    extent: Tuple[float, ...]
    faces: Tuple[FacePair, ...]
    origin: Tuple[float, ...] = ()

    def __post_init__(self):
        dims = len(self.n)
        if dims not in (2, 3):
            raise ConfigurationError(f"Grids must have 2 or 3 dimensions, got {dims}")
        if len(self.extent) != dims or len(self.faces) != dims:
            raise ConfigurationError(
                "Grid n, extent and faces must have one entry per axis"
            )
        if any(points < 4 for points in self.n):
            raise ConfigurationError(f"Every axis needs at least 4 points, got {self.n}")
        if any(not (length > 0.0) or not math.isfinite(length) for length in self.extent):
            raise ConfigurationError(f"Extents must be finite and positive: {self.extent}")
        if not self.origin:
            object.__setattr__(self, "origin", (0.0,) * dims)
        elif len(self.origin) != dims:
            raise ConfigurationError("Grid origin must have one entry per axis")

    @classmethod
    def uniform(
        cls,
        dims: int,
        n: int,
        bc: Union[BoundaryCondition, Sequence[FacePair]],
        extent: float = 1.0,
        origin: float = 0.0,
    ):
        """Square/cubic grid with ``n`` points and ``extent`` along every axis."""
        if isinstance(bc, BoundaryCondition):
            faces = tuple((bc, bc) for _ in range(dims))
        else:
            faces = tuple(tuple(pair) for pair in bc)  # type: ignore
        return cls(
            n=(n,) * dims,
            extent=(float(extent),) * dims,
            faces=faces,  # type: ignore
            origin=(float(origin),) * dims,
        )

    @property
    def dims(self) -> int:
        return len(self.n)

    @property
    def layouts(self) -> Tuple[AxisLayout, ...]:
        return tuple(
            AxisLayout.CELL
            if low.is_neumann or high.is_neumann
            else AxisLayout.VERTEX
            for low, high in self.faces
        )

    @property
    def zones(self) -> Tuple[int, ...]:
        """Number of mesh intervals per axis (``extent / h``)."""
        return tuple(
            points if layout == AxisLayout.CELL else points - 1
            for points, layout in zip(self.n, self.layouts)
        )

    @property
    def h(self) -> Tuple[float, ...]:
        return tuple(
            length / zones for length, zones in zip(self.extent, self.zones)
        )

    @property
    def shape(self) -> Tuple[int, ...]:
        """Number of unknowns per axis."""
        return tuple(
            points if layout == AxisLayout.CELL else points - 2
            for points, layout in zip(self.n, self.layouts)
        )

    @property
    def is_singular(self) -> bool:
        """True when every face is Neumann, so constants are in the null space."""
        return all(low.is_neumann and high.is_neumann for low, high in self.faces)

    def is_pure_neumann_axis(self, axis: int) -> bool:
        low, high = self.faces[axis]
        return low.is_neumann and high.is_neumann

    def lowest_phase(self, axis: int) -> float:
        """Smallest nonzero phase ``k h`` of a discrete error mode along ``axis``."""
        low, high = self.faces[axis]
        if low.is_neumann and high.is_neumann:
            return math.pi / self.n[axis]
        if low.is_neumann or high.is_neumann:
            return math.pi / (2 * self.n[axis] + 1)
        return math.pi / (self.n[axis] - 1)

    def admissible_phases(self, axis: int) -> np.ndarray:
        """Every phase of the discrete eigenmode lattice along ``axis``."""
        low, high = self.faces[axis]
        unknowns = self.shape[axis]
        if low.is_neumann and high.is_neumann:
            return np.pi * np.arange(unknowns) / unknowns
        if low.is_neumann or high.is_neumann:
            return np.pi * (2 * np.arange(unknowns) + 1) / (2 * unknowns + 1)
        return np.pi * np.arange(1, unknowns + 1) / (unknowns + 1)

    def axis_coordinates(self, axis: int, ghost: int = 0) -> np.ndarray:
        """Coordinates of the unknowns along ``axis`` extended by ``ghost`` points."""
        h = self.h[axis]
        index = np.arange(-ghost, self.shape[axis] + ghost, dtype=float)
        if self.layouts[axis] == AxisLayout.CELL:
            return self.origin[axis] + (index + 0.5) * h
        return self.origin[axis] + (index + 1.0) * h

    def coordinates(self, ghost: int = 0) -> List[np.ndarray]:
        return list(_padded_coordinates(self, ghost))


@lru_cache(maxsize=32)
def _padded_coordinates(grid: Grid, ghost: int) -> Tuple[np.ndarray, ...]:
    mesh = np.meshgrid(
        *[grid.axis_coordinates(axis, ghost) for axis in range(grid.dims)],
        indexing="ij",
    )
    for array in mesh:
        array.setflags(write=False)
    return tuple(mesh)


def _slab(dims: int, axis: int, index: slice) -> Slab:
    return tuple(index if current == axis else slice(None) for current in range(dims))


@lru_cache(maxsize=32)
def _dirichlet_samples(grid: Grid, ghost: int) -> Tuple[Tuple[Slab, np.ndarray], ...]:
    coordinates = _padded_coordinates(grid, ghost)
    samples = []
    for axis, (low, high) in enumerate(grid.faces):
        size = grid.shape[axis] + 2 * ghost
        for bc, index in (
            (low, slice(0, ghost)),
            (high, slice(size - ghost, size)),
        ):
            if bc.is_neumann:
                continue
            slab = _slab(grid.dims, axis, index)
            values = np.broadcast_to(
                np.asarray(
                    bc.value(*[array[slab] for array in coordinates]),  # type: ignore
                    dtype=float,
                ),
                coordinates[0][slab].shape,
            ).copy()
            values.setflags(write=False)
            samples.append((slab, values))
    return tuple(samples)


@dataclass
class Field:
    """Scalar unknowns on a grid, stored with an explicit ghost halo."""

    grid: Grid
    data: np.ndarray
    ghost: int = 1

    def __post_init__(self):
        expected = tuple(size + 2 * self.ghost for size in self.grid.shape)
        if self.ghost < 1:
            raise ConfigurationError("Fields need a ghost halo of width 1 or 2")
        if self.data.shape != expected:
            raise UsageError(
                f"Field data has shape {self.data.shape}, expected {expected}"
            )

    @classmethod
    def zeros(cls, grid: Grid, ghost: int = 1):
        shape = tuple(size + 2 * ghost for size in grid.shape)
        return cls(grid=grid, data=np.zeros(shape), ghost=ghost)

    @classmethod
    def from_interior(cls, grid: Grid, values: np.ndarray, ghost: int = 1):
        field_ = cls.zeros(grid, ghost)
        field_.values[...] = values
        return field_

    @classmethod
    def from_function(cls, grid: Grid, function: BoundaryFunction, ghost: int = 1):
        """Sample ``function`` on the interior points."""
        field_ = cls.zeros(grid, ghost)
        coordinates = grid.coordinates(0)
        field_.values[...] = function(*coordinates)
        return field_

    @property
    def interior(self) -> Slab:
        return tuple(
            slice(self.ghost, self.ghost + size) for size in self.grid.shape
        )

    @property
    def values(self) -> np.ndarray:
        return self.data[self.interior]

    def copy(self):
        return Field(grid=self.grid, data=self.data.copy(), ghost=self.ghost)


def fill_ghosts(field_: Field, reach: Optional[int] = None) -> Field:
    """Populate the halo of ``field_`` in place from its interior and its BCs.

    Dirichlet faces are written first (corners shared by two Dirichlet faces
    take the value of the later axis); Neumann mirrors then run axis by axis
    over the full padded extent, so mixed corners stay mirror-consistent.
    """
    grid = field_.grid
    ghost = field_.ghost
    if reach is not None and reach > ghost:
        raise ConfigurationError(
            f"Stencil reach {reach} exceeds the ghost width {ghost} of the field"
        )

    data = field_.data
    for slab, values in _dirichlet_samples(grid, ghost):
        data[slab] = values

    for axis, (low, high) in enumerate(grid.faces):
        size = grid.shape[axis]
        if low.is_neumann:
            data[_slab(grid.dims, axis, slice(0, ghost))] = data[
                _slab(grid.dims, axis, slice(2 * ghost - 1, ghost - 1, -1))
            ]
        if high.is_neumann:
            last = ghost + size - 1
            data[_slab(grid.dims, axis, slice(ghost + size, 2 * ghost + size))] = data[
                _slab(grid.dims, axis, slice(last, last - ghost, -1))
            ]

    return field_


def inf_norm_diff(u: Field, v: Field) -> float:
    """Max-norm of the interior difference, the successive-difference residual."""
    if u.grid != v.grid or u.values.shape != v.values.shape:
        raise UsageError("Cannot compare fields defined on different grids")

    return float(np.max(np.abs(u.values - v.values)))


def remove_mean(field_: Field) -> Field:
    """Project the constant mode out of the interior in place."""
    field_.values[...] -= np.mean(field_.values)
    return field_
