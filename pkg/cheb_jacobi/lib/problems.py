"""Model problems used by the benchmark harness."""
import logging
import math
from typing import Callable

import numpy as np

from .config import ExperimentConfig
from .const import (
    PROBLEM_LAPLACE2D_NEUMANN,
    PROBLEM_POISSON2D_EXP,
    PROBLEM_POISSON3D_SPHERE,
    SCHEDULE_BOUNDS_FULL_DOMAIN,
)
from .exceptions import ConfigurationError
from .grid import BoundaryCondition, Field, Grid
from .solver import Problem
from .stencil import SpectralBounds, StencilFamily, StencilSpec, kappa_bounds

_LOGGER: logging.Logger = logging.getLogger(__package__)


def exp_solution(x, y):
    return -np.exp(x * y)


def exp_source(x, y):
    return -(x * x + y * y) * np.exp(x * y)


def exp_source_laplacian(x, y):
    """``Delta`` of ``exp_source``."""
    r2 = x * x + y * y
    return -np.exp(x * y) * (4.0 + 8.0 * x * y + r2 * r2)


def is_fourth_order_compact(spec: StencilSpec) -> bool:
    """The 9-point combination with ``a/b = 2/3``, fourth order once the source is corrected."""
    return spec.width == 1 and spec.family in (
        StencilFamily.NINE_POINT_2D,
        StencilFamily.GENERAL_COMBO,
    ) and 3 * spec.a == 2 * spec.b  # type: ignore


def sphere_potential(charge: float, radius: float) -> Callable:
    """Potential of a uniformly charged ball centred at the origin.

    ``Q / r`` outside and ``Q (3 R^2 - r^2) / (2 R^3)`` inside, so that
    ``Delta phi = -4 pi rho`` with ``rho = 3 Q / (4 pi R^3)``.
    """

    def potential(x, y, z):
        r = np.sqrt(x * x + y * y + z * z)
        inside = charge * (3.0 * radius ** 2 - r * r) / (2.0 * radius ** 3)
        outside = charge / np.maximum(r, radius)
        return np.where(r < radius, inside, outside)

    return potential


def sphere_source(charge: float, radius: float) -> Callable:
    density = 3.0 * charge / (4.0 * math.pi * radius ** 3)

    def source(x, y, z):
        r2 = x * x + y * y + z * z
        return np.where(r2 < radius * radius, -4.0 * math.pi * density, 0.0)

    return source


def laplace2d_neumann(config: ExperimentConfig) -> Problem:
    spec = config.stencil_spec()
    grid = Grid.uniform(2, config.n, BoundaryCondition.neumann(), config.extent)
    return Problem(
        grid=grid,
        stencil=spec,
        rhs=Field.zeros(grid, spec.reach),
        name=PROBLEM_LAPLACE2D_NEUMANN,
    )


def poisson2d_exp(config: ExperimentConfig) -> Problem:
    spec = config.stencil_spec()
    grid = Grid.uniform(2, config.n, BoundaryCondition.dirichlet(exp_solution), config.extent)
    rhs = Field.from_function(grid, exp_source, spec.reach)
    if is_fourth_order_compact(spec):
        h = grid.h[0]
        correction = Field.from_function(grid, exp_source_laplacian, spec.reach)
        rhs.values[...] += (h * h / 12.0) * correction.values
        _LOGGER.debug("Applied the fourth-order source correction (h=%g)", h)
    return Problem(
        grid=grid,
        stencil=spec,
        rhs=rhs,
        analytic=exp_solution,
        name=PROBLEM_POISSON2D_EXP,
    )


def _sphere_radius(config: ExperimentConfig) -> float:
    return config.radius or config.extent / 4.0


def poisson3d_sphere(config: ExperimentConfig) -> Problem:
    """Charged ball in a cube; the octant variant keeps the ``x, y, z >= 0`` eighth.

    The octant has homogeneous Neumann symmetry planes through the centre on
    its low faces and the exact potential on its high faces.
    """
    spec = config.stencil_spec()
    radius = _sphere_radius(config)
    potential = sphere_potential(config.charge, radius)
    dirichlet = BoundaryCondition.dirichlet(potential)

    if config.octant:
        grid = Grid.uniform(
            3,
            config.n,
            [(BoundaryCondition.neumann(), dirichlet)] * 3,
            config.extent / 2.0,
        )
    else:
        grid = Grid.uniform(3, config.n, dirichlet, config.extent, -config.extent / 2.0)

    return Problem(
        grid=grid,
        stencil=spec,
        rhs=Field.from_function(grid, sphere_source(config.charge, radius), spec.reach),
        analytic=potential,
        name=PROBLEM_POISSON3D_SPHERE + ("-octant" if config.octant else ""),
    )


_BUILDERS = {
    PROBLEM_LAPLACE2D_NEUMANN: laplace2d_neumann,
    PROBLEM_POISSON2D_EXP: poisson2d_exp,
    PROBLEM_POISSON3D_SPHERE: poisson3d_sphere,
}


def build_problem(config: ExperimentConfig) -> Problem:
    try:
        builder = _BUILDERS[config.problem]
    except KeyError as err:
        raise ConfigurationError(f"Unknown problem {config.problem!r}") from err

    problem = builder(config)
    _LOGGER.info(
        "Built %s: %s unknowns, h=%s, stencil %s",
        problem.name,
        "x".join(str(size) for size in problem.grid.shape),
        ", ".join(f"{step:.4g}" for step in problem.grid.h),
        problem.stencil.family.value,
    )
    return problem


def schedule_bounds(config: ExperimentConfig, problem: Problem) -> SpectralBounds:
    """Spectral interval the CJM weights are built for.

    With ``schedule_bounds = full-domain`` an octant run reuses the interval of
    the all-Dirichlet cube it was cut from.
    """
    if config.octant and config.schedule_bounds == SCHEDULE_BOUNDS_FULL_DOMAIN:
        full = Grid.uniform(
            3,
            2 * config.n,
            BoundaryCondition.dirichlet(sphere_potential(config.charge, _sphere_radius(config))),
            config.extent,
            -config.extent / 2.0,
        )
        return kappa_bounds(problem.stencil, full)
    return problem.kappa_bounds()


def discretization_error(problem: Problem, solution: Field) -> float:
    """Max-norm distance between ``solution`` and the analytic solution."""
    if problem.analytic is None:
        raise ConfigurationError(f"Problem {problem.name} has no analytic solution")
    exact = Field.from_function(problem.grid, problem.analytic, solution.ghost)
    return float(np.max(np.abs(exact.values - solution.values)))
