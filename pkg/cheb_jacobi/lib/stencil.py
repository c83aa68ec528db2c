"""Discrete Laplacians, their diagonals, von Neumann symbols and spectral bounds.

The 9-point family is the convex combination ``alpha S_+ + (1 - alpha) S_x``
of the standard and the rotated 5-point stencils with ``alpha = a / b``; the
17-point family combines the wide fourth-order cross with its rotated
counterpart in the same way.
"""
from dataclasses import dataclass
from enum import Enum
from itertools import product
import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import ConfigurationError, UsageError
from .grid import Field, Grid

Offset = Tuple[int, ...]
Tap = Tuple[Offset, float]
Spacing = Union[float, Sequence[float]]

_ISOTROPY_TOLERANCE = 1e-12


class StencilFamily(str, Enum):
    FIVE_POINT_2D = "five-point"
    SEVEN_POINT_3D = "seven-point"
    NINE_POINT_2D = "nine-point"
    SEVENTEEN_POINT_2D = "seventeen-point"
    GENERAL_COMBO = "general-combo"


_CANONICAL = {
    StencilFamily.FIVE_POINT_2D: (1, 1, 1),
    StencilFamily.SEVEN_POINT_3D: (1, 1, 1),
    StencilFamily.NINE_POINT_2D: (2, 3, 1),
    StencilFamily.SEVENTEEN_POINT_2D: (1, 2, 2),
}


@dataclass(frozen=True)
class SpectralBounds:
    kappa_min: float
    kappa_max: float

    def __post_init__(self):
        if not (math.isfinite(self.kappa_min) and math.isfinite(self.kappa_max)):
            raise UsageError("Spectral bounds must be finite")
        if self.kappa_min < 0.0 or self.kappa_max <= 0.0:
            raise UsageError(
                f"Spectral bounds must satisfy 0 <= kappa_min, 0 < kappa_max; got {self}"
            )
        if self.kappa_min > self.kappa_max:
            raise UsageError(f"kappa_min exceeds kappa_max: {self}")


@dataclass(frozen=True)
class StencilSpec:
    """A Laplacian discretization.

    ``a`` and ``b`` weight the standard and rotated stencils (``alpha = a/b``);
    ``width`` selects the compact (1) or the wide (2) combination for
    ``GENERAL_COMBO``. Named families fill in their canonical values.
    """

    family: StencilFamily
    a: Optional[int] = None
    b: Optional[int] = None
    width: Optional[int] = None

    def __post_init__(self):
        family = StencilFamily(self.family)
        object.__setattr__(self, "family", family)

        if family in _CANONICAL:
            for name, canonical in zip(("a", "b", "width"), _CANONICAL[family]):
                given = getattr(self, name)
                if given is not None and given != canonical:
                    raise ConfigurationError(
                        f"{family.value} stencil has fixed {name}={canonical}, got {given}"
                    )
                object.__setattr__(self, name, canonical)
            return

        a = 1 if self.a is None else self.a
        b = 1 if self.b is None else self.b
        width = 1 if self.width is None else self.width
        if b < 1 or a < 0 or a > b:
            raise ConfigurationError(
                f"Combination weights need 0 <= a <= b and b >= 1, got a={a}, b={b}"
            )
        if width not in (1, 2):
            raise ConfigurationError(f"Combination width must be 1 or 2, got {width}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "width", width)

    @classmethod
    def five_point(cls):
        return cls(StencilFamily.FIVE_POINT_2D)

    @classmethod
    def seven_point(cls):
        return cls(StencilFamily.SEVEN_POINT_3D)

    @classmethod
    def nine_point(cls):
        return cls(StencilFamily.NINE_POINT_2D)

    @classmethod
    def seventeen_point(cls):
        return cls(StencilFamily.SEVENTEEN_POINT_2D)

    @classmethod
    def general_combo(cls, a: int, b: int, width: int = 1):
        return cls(StencilFamily.GENERAL_COMBO, a=a, b=b, width=width)

    @property
    def dims(self) -> int:
        return 3 if self.family == StencilFamily.SEVEN_POINT_3D else 2

    @property
    def reach(self) -> int:
        return self.width  # type: ignore

    @property
    def is_axis_stencil(self) -> bool:
        """5- and 7-point stencils, which accept a different spacing per axis."""
        return self.family in (StencilFamily.FIVE_POINT_2D, StencilFamily.SEVEN_POINT_3D)

    def taps(self, h: Spacing) -> Tuple[Tap, ...]:
        """Offsets and coefficients of ``Delta u``, centre tap first."""
        spacing = _spacing(self, h)

        if self.is_axis_stencil:
            inverse_squares = [1.0 / (step * step) for step in spacing]
            taps = [((0,) * self.dims, -sum(2.0 * value for value in inverse_squares))]
            for axis, value in enumerate(inverse_squares):
                for sign in (-1, 1):
                    offset = tuple(sign if i == axis else 0 for i in range(self.dims))
                    taps.append((offset, value))
            return tuple(taps)

        a, b = self.a, self.b  # type: ignore
        step = spacing[0]
        if self.width == 1:
            norm = 2 * b * (step * step)
            raw = [((0, 0), -4 * (a + b))]
            raw += [(offset, 2 * a) for offset in _cross(1)]
            raw += [(offset, b - a) for offset in _diagonals(1)]
        else:
            norm = 24 * b * (step * step)
            raw = [((0, 0), -60 * (a + b))]
            raw += [(offset, 32 * a) for offset in _cross(1)]
            raw += [(offset, -2 * a) for offset in _cross(2)]
            raw += [(offset, 16 * (b - a)) for offset in _diagonals(1)]
            raw += [(offset, -(b - a)) for offset in _diagonals(2)]

        return tuple((offset, weight / norm) for offset, weight in raw if weight != 0)


def _cross(distance: int):
    return [(-distance, 0), (distance, 0), (0, -distance), (0, distance)]


def _diagonals(distance: int):
    return [
        (-distance, -distance),
        (distance, distance),
        (-distance, distance),
        (distance, -distance),
    ]


def _spacing(spec: StencilSpec, h: Spacing) -> Tuple[float, ...]:
    if isinstance(h, (int, float)):
        spacing = (float(h),) * spec.dims
    else:
        spacing = tuple(float(step) for step in h)
    if len(spacing) != spec.dims:
        raise ConfigurationError(
            f"{spec.family.value} stencil needs {spec.dims} spacings, got {len(spacing)}"
        )
    if any(not (step > 0.0) for step in spacing):
        raise ConfigurationError(f"Spacings must be positive, got {spacing}")
    if not spec.is_axis_stencil and not math.isclose(
        spacing[0], spacing[1], rel_tol=_ISOTROPY_TOLERANCE
    ):
        raise ConfigurationError(
            f"{spec.family.value} stencil needs equal spacing on both axes, got {spacing}"
        )
    return spacing


def _check_grid(spec: StencilSpec, grid: Grid):
    if spec.dims != grid.dims:
        raise ConfigurationError(
            f"{spec.family.value} stencil is {spec.dims}D but the grid is {grid.dims}D"
        )


def apply_laplacian(spec: StencilSpec, u: Field) -> Field:
    """Return ``Delta u`` on the interior; the halo of ``u`` must be filled."""
    _check_grid(spec, u.grid)
    if spec.reach > u.ghost:
        raise ConfigurationError(
            f"Stencil reach {spec.reach} exceeds the ghost width {u.ghost} of the field"
        )

    result = Field.zeros(u.grid, u.ghost)
    out = result.values
    shape = u.grid.shape
    ghost = u.ghost
    for index, (offset, coefficient) in enumerate(spec.taps(u.grid.h)):
        window = tuple(
            slice(ghost + shift, ghost + shift + size)
            for shift, size in zip(offset, shape)
        )
        if index == 0:
            out[...] = coefficient * u.data[window]
        else:
            out += coefficient * u.data[window]
    return result


def diagonal_coeff(spec: StencilSpec, h: Spacing) -> float:
    """Coefficient of ``u_ij`` (``u_ijk``) in ``Delta u``; always negative."""
    return spec.taps(h)[0][1]


def _phase_symbol(spec: StencilSpec, theta: Sequence, h: Spacing):
    spacing = _spacing(spec, h)
    theta = [np.asarray(value, dtype=float) for value in theta]
    if len(theta) != spec.dims:
        raise UsageError(
            f"{spec.family.value} stencil needs a {spec.dims}-component wavevector"
        )

    if spec.is_axis_stencil:
        inverse_squares = [1.0 / (step * step) for step in spacing]
        numerator = sum(
            4.0 * weight * np.sin(phase / 2.0) ** 2
            for weight, phase in zip(inverse_squares, theta)
        )
        return numerator / sum(2.0 * weight for weight in inverse_squares)

    a, b = spec.a, spec.b  # type: ignore
    tx, ty = theta
    if spec.width == 1:
        return (2.0 * a / (a + b)) * (
            np.sin(tx / 2.0) ** 2 + np.sin(ty / 2.0) ** 2
        ) + ((b - a) / (a + b)) * (1.0 - np.cos(tx) * np.cos(ty))

    bracket = (
        -2.0 * a * (np.sin(tx) ** 2 + np.sin(ty) ** 2)
        + 32.0 * a * (np.sin(tx / 2.0) ** 2 + np.sin(ty / 2.0) ** 2)
        - (b - a)
        * (
            (1.0 - np.cos(2.0 * tx) * np.cos(2.0 * ty))
            - 16.0 * (1.0 - np.cos(tx) * np.cos(ty))
        )
    )
    return bracket / (15.0 * (a + b))


def kappa_symbol(spec: StencilSpec, k: Sequence, h: Spacing):
    """Von Neumann symbol: one weighted-Jacobi step maps mode ``k`` by ``1 - omega kappa``.

    ``k`` may hold scalars or broadcastable arrays; a scalar wavevector gives a
    float.
    """
    spacing = _spacing(spec, h)
    if len(k) != spec.dims:
        raise UsageError(
            f"{spec.family.value} stencil needs a {spec.dims}-component wavevector"
        )
    theta = [np.asarray(wave, dtype=float) * step for wave, step in zip(k, spacing)]
    value = _phase_symbol(spec, theta, spacing)
    return float(value) if np.ndim(value) == 0 else value


def phase_symbol(spec: StencilSpec, theta: Sequence, h: Spacing = 1.0):
    """``kappa_symbol`` expressed directly in the phases ``k_i h_i``."""
    value = _phase_symbol(spec, theta, h)
    return float(value) if np.ndim(value) == 0 else value


def kappa_bounds(spec: StencilSpec, grid: Grid) -> SpectralBounds:
    """Extremal symbol values over the admissible error modes of ``grid``.

    The lower bound puts every non-periodic axis at its lowest mode and the
    pure-Neumann axes at ``k = 0``; on a fully Neumann grid the constant mode
    is excluded and the smallest single-axis mode is taken instead. The upper
    bound is the largest symbol over the corner phases ``{0, pi}^d``.
    """
    _check_grid(spec, grid)
    h = grid.h
    dims = grid.dims

    if grid.is_singular:
        kappa_min = min(
            phase_symbol(
                spec,
                [grid.lowest_phase(axis) if axis == active else 0.0 for axis in range(dims)],
                h,
            )
            for active in range(dims)
        )
    else:
        kappa_min = phase_symbol(
            spec,
            [
                0.0 if grid.is_pure_neumann_axis(axis) else grid.lowest_phase(axis)
                for axis in range(dims)
            ],
            h,
        )

    kappa_max = max(
        phase_symbol(spec, corner, h)
        for corner in product((0.0, math.pi), repeat=dims)
        if any(corner)
    )

    return SpectralBounds(kappa_min=kappa_min, kappa_max=kappa_max)
