"""Independent reference implementations used as test oracles.

Operators are assembled densely from their textbook form (convex combinations
of the standard and the rotated stencils), not from ``StencilSpec.taps``.
"""
from itertools import product
import math
from typing import Dict, Tuple

import numpy as np

from cheb_jacobi.lib.grid import Grid
from cheb_jacobi.lib.stencil import StencilFamily, StencilSpec


def _cross(scale: float, reach: int, weights) -> Dict[Tuple[int, int], float]:
    taps: Dict[Tuple[int, int], float] = {}
    for distance, weight in zip(range(reach + 1), weights):
        offsets = [(0, 0)] if distance == 0 else [
            (distance, 0),
            (-distance, 0),
            (0, distance),
            (0, -distance),
        ]
        for offset in offsets:
            taps[offset] = taps.get(offset, 0.0) + scale * weight
    return taps


def _rotated(scale: float, reach: int, weights) -> Dict[Tuple[int, int], float]:
    taps: Dict[Tuple[int, int], float] = {}
    for distance, weight in zip(range(reach + 1), weights):
        offsets = [(0, 0)] if distance == 0 else [
            (distance, distance),
            (-distance, -distance),
            (distance, -distance),
            (-distance, distance),
        ]
        for offset in offsets:
            taps[offset] = taps.get(offset, 0.0) + scale * weight
    return taps


def stencil_table(spec: StencilSpec, h: float) -> Dict[Tuple[int, ...], float]:
    """``{offset: coefficient}`` of the Laplacian on an isotropic mesh."""
    if spec.family == StencilFamily.SEVEN_POINT_3D:
        table = {(0, 0, 0): -6.0 / h ** 2}
        for axis, sign in product(range(3), (-1, 1)):
            offset = tuple(sign if i == axis else 0 for i in range(3))
            table[offset] = 1.0 / h ** 2
        return table

    alpha = spec.a / spec.b  # type: ignore
    if spec.width == 1:
        plus = _cross(1.0 / h ** 2, 1, (-4.0, 1.0))
        times = _rotated(1.0 / (2.0 * h ** 2), 1, (-4.0, 1.0))
    else:
        plus = _cross(1.0 / (12.0 * h ** 2), 2, (-60.0, 16.0, -1.0))
        times = _rotated(1.0 / (24.0 * h ** 2), 2, (-60.0, 16.0, -1.0))

    table = {}
    for offset in set(plus) | set(times):
        value = alpha * plus.get(offset, 0.0) + (1.0 - alpha) * times.get(offset, 0.0)
        if abs(value) > 1e-300:
            table[offset] = value
    return table


def _coordinate(grid: Grid, axis: int, index: int) -> float:
    low, high = grid.faces[axis]
    h = grid.extent[axis] / (
        grid.n[axis] if (low.is_neumann or high.is_neumann) else grid.n[axis] - 1
    )
    if low.is_neumann or high.is_neumann:
        return grid.origin[axis] + (index + 0.5) * h
    return grid.origin[axis] + (index + 1) * h


def _entries(spec: StencilSpec, grid: Grid):
    shape = grid.shape
    h = grid.h[0]
    table = stencil_table(spec, h)
    size = int(np.prod(shape))
    rows, cols, values = [], [], []
    g = np.zeros(size)

    for flat, index in enumerate(np.ndindex(*shape)):
        for offset, coefficient in table.items():
            target = []
            dirichlet_faces = []
            for axis, (i, shift) in enumerate(zip(index, offset)):
                j = i + shift
                low, high = grid.faces[axis]
                if j < 0:
                    if low.is_neumann:
                        j = -1 - j
                    else:
                        dirichlet_faces.append(axis)
                elif j >= shape[axis]:
                    if high.is_neumann:
                        j = 2 * shape[axis] - 1 - j
                    else:
                        dirichlet_faces.append(axis)
                target.append(j)

            if dirichlet_faces:
                low, high = grid.faces[dirichlet_faces[-1]]
                axis = dirichlet_faces[-1]
                bc = low if target[axis] < 0 else high
                point = [_coordinate(grid, k, j) for k, j in enumerate(target)]
                g[flat] += coefficient * float(bc.value(*point))
            else:
                rows.append(flat)
                cols.append(np.ravel_multi_index(tuple(target), shape))
                values.append(coefficient)
    return (rows, cols, values), g, size


def assemble(spec: StencilSpec, grid: Grid):
    """Dense ``A`` and vector ``g`` with ``Delta_h u = A u + g`` on the unknowns."""
    (rows, cols, values), g, size = _entries(spec, grid)
    A = np.zeros((size, size))
    np.add.at(A, (rows, cols), values)
    return A, g


def assemble_sparse(spec: StencilSpec, grid: Grid):
    from scipy.sparse import coo_matrix

    (rows, cols, values), g, size = _entries(spec, grid)
    return coo_matrix((values, (rows, cols)), shape=(size, size)).tocsr(), g


def centre_coefficient(spec: StencilSpec, h: float) -> float:
    return stencil_table(spec, h)[(0,) * spec.dims]


def jacobi_step(spec, grid, u: np.ndarray, rhs: np.ndarray, omega: float) -> np.ndarray:
    """``u + omega d^-1 (b - Delta_h u)`` on flattened unknowns."""
    A, g = assemble(spec, grid)
    d = centre_coefficient(spec, grid.h[0])
    flat = u.ravel()
    return (flat + omega * (rhs.ravel() - (A @ flat + g)) / d).reshape(u.shape)


def sor_step(spec, grid, u: np.ndarray, rhs: np.ndarray, omega: float) -> np.ndarray:
    """One lexicographic SOR sweep of the dense operator, row by row in C order."""
    A, g = assemble(spec, grid)
    d = centre_coefficient(spec, grid.h[0])
    flat = u.ravel().copy()
    b = rhs.ravel()
    for row in range(flat.size):
        flat[row] += omega * (b[row] - (A[row] @ flat + g[row])) / d
    return flat.reshape(u.shape)


def inf_norm_loop(u: np.ndarray, v: np.ndarray) -> float:
    """``max |u - v|`` by an explicit scalar loop."""
    largest = 0.0
    for a, b in zip(u.ravel().tolist(), v.ravel().tolist()):
        largest = max(largest, abs(a - b))
    return largest


def solve_dense(spec, grid, rhs: np.ndarray) -> np.ndarray:
    A, g = assemble(spec, grid)
    return np.linalg.solve(A, rhs.ravel() - g).reshape(rhs.shape)


def solve_sparse(spec, grid, rhs: np.ndarray) -> np.ndarray:
    from scipy.sparse.linalg import spsolve

    A, g = assemble_sparse(spec, grid)
    return spsolve(A, rhs.ravel() - g).reshape(rhs.shape)


def chebyshev_recurrence(M: int, x: float) -> float:
    """``T_M(x)`` by the three-term recurrence."""
    if M == 0:
        return 1.0
    previous, current = 1.0, x
    for _ in range(M - 1):
        previous, current = current, 2.0 * x * current - previous
    return current


def log_chebyshev_recurrence(M: int, x: float) -> float:
    """``log |T_M(x)|`` by a rescaled recurrence that never overflows."""
    previous, current = 1.0, abs(x)
    log_scale = 0.0
    for _ in range(M - 1):
        previous, current = current, 2.0 * abs(x) * current - previous
        if current > 1e100:
            previous /= current
            log_scale += math.log(current)
            current = 1.0
    return log_scale + math.log(current)


def smooth_boundary(*coordinates):
    """A non-trivial boundary function in 2 or 3 dimensions."""
    x = coordinates[0]
    y = coordinates[1]
    value = np.sin(1.3 * x + 0.4) * np.cos(0.7 * y) + x * y
    if len(coordinates) == 3:
        value = value + coordinates[2] ** 2
    return value


def zero_boundary(*coordinates):
    return 0.0 * coordinates[0]
