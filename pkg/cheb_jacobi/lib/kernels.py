"""Compiled sweep kernels.

All kernels work on padded arrays (interior offset by ``ghost``) and a stencil
given as integer ``offsets`` (taps x dims) plus ``coefficients``. They return
the max-norm of the update, i.e. the successive-difference residual; a
non-finite update is reported as ``inf``.

Jacobi kernels are out-of-place and parallel over the outermost axis, each
worker writing a disjoint slab and its own slot of ``row_max``. SOR kernels
are in-place, lexicographic and serial. They read taps across a Neumann face
from the reflected interior cell (``mirror[axis] = (low, high)``) rather than
from the halo, whose mirrors go stale as soon as the sweep updates the cells
next to the face.
"""
from numba import njit, prange
import numpy as np


@njit(cache=True)
def _track(largest, change):
    magnitude = abs(change)
    if magnitude <= largest:
        return largest
    if magnitude != magnitude:
        return np.inf
    return magnitude


@njit(parallel=True, cache=True)
def jacobi_sweep_2d(src, dst, rhs, offsets, coefficients, ghost, scale):
    nx, ny = rhs.shape
    taps = coefficients.shape[0]
    row_max = np.zeros(nx)
    for i in prange(nx):
        largest = 0.0
        p = i + ghost
        for j in range(ny):
            q = j + ghost
            laplacian = 0.0
            for t in range(taps):
                laplacian += coefficients[t] * src[p + offsets[t, 0], q + offsets[t, 1]]
            change = scale * (rhs[i, j] - laplacian)
            dst[p, q] = src[p, q] + change
            largest = _track(largest, change)
        row_max[i] = largest
    return row_max.max()


@njit(parallel=True, cache=True)
def jacobi_sweep_3d(src, dst, rhs, offsets, coefficients, ghost, scale):
    nx, ny, nz = rhs.shape
    taps = coefficients.shape[0]
    row_max = np.zeros(nx)
    for i in prange(nx):
        largest = 0.0
        p = i + ghost
        for j in range(ny):
            q = j + ghost
            for k in range(nz):
                r = k + ghost
                laplacian = 0.0
                for t in range(taps):
                    laplacian += (
                        coefficients[t]
                        * src[p + offsets[t, 0], q + offsets[t, 1], r + offsets[t, 2]]
                    )
                change = scale * (rhs[i, j, k] - laplacian)
                dst[p, q, r] = src[p, q, r] + change
                largest = _track(largest, change)
        row_max[i] = largest
    return row_max.max()


@njit(cache=True)
def _reflect(index, size, low_mirror, high_mirror):
    if index < 0 and low_mirror:
        return -1 - index
    if index >= size and high_mirror:
        return 2 * size - 1 - index
    return index


@njit(cache=True)
def sor_sweep_2d(u, rhs, offsets, coefficients, ghost, scale, mirror):
    nx, ny = rhs.shape
    taps = coefficients.shape[0]
    largest = 0.0
    for i in range(nx):
        for j in range(ny):
            laplacian = 0.0
            for t in range(taps):
                a = _reflect(i + offsets[t, 0], nx, mirror[0, 0], mirror[0, 1])
                b = _reflect(j + offsets[t, 1], ny, mirror[1, 0], mirror[1, 1])
                laplacian += coefficients[t] * u[a + ghost, b + ghost]
            change = scale * (rhs[i, j] - laplacian)
            u[i + ghost, j + ghost] += change
            largest = _track(largest, change)
    return largest


@njit(cache=True)
def sor_sweep_3d(u, rhs, offsets, coefficients, ghost, scale, mirror):
    nx, ny, nz = rhs.shape
    taps = coefficients.shape[0]
    largest = 0.0
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                laplacian = 0.0
                for t in range(taps):
                    a = _reflect(i + offsets[t, 0], nx, mirror[0, 0], mirror[0, 1])
                    b = _reflect(j + offsets[t, 1], ny, mirror[1, 0], mirror[1, 1])
                    c = _reflect(k + offsets[t, 2], nz, mirror[2, 0], mirror[2, 1])
                    laplacian += coefficients[t] * u[a + ghost, b + ghost, c + ghost]
                change = scale * (rhs[i, j, k] - laplacian)
                u[i + ghost, j + ghost, k + ghost] += change
                largest = _track(largest, change)
    return largest
