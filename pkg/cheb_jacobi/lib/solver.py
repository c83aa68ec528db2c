"""Iteration drivers: weighted-Jacobi sweeps, CJM and the classical baselines.

Every driver records the successive-difference residual
``max |u^n - u^(n-1)|`` and declares convergence once it drops to the
absolute tolerance.
"""
import csv
from dataclasses import dataclass, field
import logging
import math
import time
from typing import Callable, IO, List, Optional, Tuple, Union

import numpy as np

from . import kernels
from .chebyshev import (
    WeightSchedule,
    amplification_bound,
    make_weights,
    min_cycle_size,
)
from .const import (
    DIVERGENCE_FACTOR,
    METHOD_GAUSS_SEIDEL,
    METHOD_JACOBI,
    METHOD_SOR,
    RESIDUAL_CSV_HEADER,
)
from .exceptions import (
    ConfigurationError,
    DegenerateIntervalError,
    DivergenceError,
    SolveTimeoutError,
    UsageError,
)
from .grid import Field, Grid, fill_ghosts, remove_mean
from .ordering import OrderingPlan, apply_ordering, default_plan
from .stencil import SpectralBounds, StencilSpec, diagonal_coeff, kappa_bounds

_LOGGER: logging.Logger = logging.getLogger(__package__)

History = List[Tuple[int, float]]


@dataclass
class Problem:
    """A discrete problem ``Delta_h u = rhs`` with the boundary data of ``grid``."""

    grid: Grid
    stencil: StencilSpec
    rhs: Field
    analytic: Optional[Callable] = None
    name: str = "custom"
    _rhs_values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.rhs.grid != self.grid:
            raise ConfigurationError("The right-hand side lives on a different grid")
        if self.stencil.dims != self.grid.dims:
            raise ConfigurationError(
                f"{self.stencil.family.value} stencil does not fit a {self.grid.dims}D grid"
            )
        values = np.ascontiguousarray(self.rhs.values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("The right-hand side must be finite")
        self._rhs_values = values

    @property
    def bc(self):
        return self.grid.faces

    @property
    def ghost(self) -> int:
        return self.stencil.reach

    @property
    def diagonal(self) -> float:
        return diagonal_coeff(self.stencil, self.grid.h)

    @property
    def rhs_values(self) -> np.ndarray:
        return self._rhs_values

    def kappa_bounds(self) -> SpectralBounds:
        return kappa_bounds(self.stencil, self.grid)

    def new_field(self) -> Field:
        return Field.zeros(self.grid, self.ghost)


@dataclass(frozen=True)
class SolverReport:
    method: str
    history: Tuple[Tuple[int, float], ...]
    iterations: int
    converged: bool
    wall_time: float
    predicted_bound: Optional[float] = None
    schedule: Optional[WeightSchedule] = field(default=None, repr=False, compare=False)
    solution: Optional[Field] = field(default=None, repr=False, compare=False)

    @property
    def final_residual(self) -> float:
        return self.history[-1][1] if self.history else math.nan

    @property
    def achieved_reduction(self) -> float:
        """Last recorded residual over the first one."""
        if not self.history:
            return math.nan
        first = self.history[0][1]
        if first == 0.0:
            return 0.0
        return self.history[-1][1] / first


def _stencil_arrays(problem: Problem) -> Tuple[np.ndarray, np.ndarray]:
    taps = problem.stencil.taps(problem.grid.h)
    offsets = np.array([offset for offset, _ in taps], dtype=np.int64)
    coefficients = np.array([coefficient for _, coefficient in taps], dtype=float)
    return offsets, coefficients


def _check_field(u: Field, problem: Problem):
    if u.grid != problem.grid:
        raise UsageError("The iterate lives on a different grid than the problem")
    if u.ghost < problem.ghost:
        raise ConfigurationError(
            f"Stencil reach {problem.ghost} exceeds the ghost width {u.ghost} of the iterate"
        )


class _Sweeper:
    """Compiled sweeps bound to one problem."""

    def __init__(self, problem: Problem, ghost: int):
        self.problem = problem
        self.ghost = ghost
        self.offsets, self.coefficients = _stencil_arrays(problem)
        self.diagonal = float(self.coefficients[0])
        three_d = problem.grid.dims == 3
        self._jacobi = kernels.jacobi_sweep_3d if three_d else kernels.jacobi_sweep_2d
        self._sor = kernels.sor_sweep_3d if three_d else kernels.sor_sweep_2d
        self.mirror = np.array(
            [[low.is_neumann, high.is_neumann] for low, high in problem.grid.faces],
            dtype=np.bool_,
        )

    def jacobi(self, src: Field, dst: Field, omega: float) -> float:
        fill_ghosts(src, self.problem.ghost)
        return float(
            self._jacobi(
                src.data,
                dst.data,
                self.problem.rhs_values,
                self.offsets,
                self.coefficients,
                self.ghost,
                omega / self.diagonal,
            )
        )

    def sor(self, u: Field, omega: float) -> float:
        fill_ghosts(u, self.problem.ghost)
        return float(
            self._sor(
                u.data,
                self.problem.rhs_values,
                self.offsets,
                self.coefficients,
                self.ghost,
                omega / self.diagonal,
                self.mirror,
            )
        )


def weighted_jacobi_sweep(
    u: Field, problem: Problem, omega: float, iteration: int = 0
) -> Field:
    """Return ``u + omega d^-1 (rhs - Delta u)`` as a new field; ``u`` keeps its interior."""
    if not omega > 0.0:
        raise UsageError(f"Relaxation weight must be positive, got {omega}")
    _check_field(u, problem)

    result = u.copy()
    change = _Sweeper(problem, u.ghost).jacobi(u, result, omega)
    if not math.isfinite(change):
        raise DivergenceError("Non-finite value in weighted Jacobi sweep", iteration, omega)
    fill_ghosts(result, problem.ghost)
    return result


def defect(u: Field, problem: Problem) -> float:
    """Max-norm of ``d^-1 (rhs - Delta u)``, the change an unweighted sweep would make."""
    _check_field(u, problem)
    swept = u.copy()
    return _Sweeper(problem, u.ghost).jacobi(u.copy(), swept, 1.0)


def initial_guess(problem: Problem, seed: Optional[int] = None) -> Field:
    """Zero for well-posed problems; a seeded mean-free random field when singular."""
    u = problem.new_field()
    if problem.grid.is_singular:
        rng = np.random.default_rng(seed)
        u.values[...] = rng.standard_normal(problem.grid.shape)
        remove_mean(u)
    return u


class _Monitor:
    """Residual bookkeeping shared by all drivers."""

    def __init__(
        self, method: str, tolerance: float, stride: int, deadline: Optional[float] = None
    ):
        if stride < 1:
            raise ConfigurationError(f"Recording stride must be at least 1, got {stride}")
        if not tolerance >= 0.0:
            raise ConfigurationError(f"Tolerance must be non-negative, got {tolerance}")
        self.method = method
        self.tolerance = tolerance
        self.stride = stride
        self.deadline = deadline
        self.history: History = []
        self.reference: Optional[float] = None
        self.debug = _LOGGER.isEnabledFor(logging.DEBUG)

    def check(
        self, iteration: int, residual: float, omega: float, force: bool = False
    ) -> bool:
        """Record ``residual`` when due; True once converged."""
        if not math.isfinite(residual):
            raise DivergenceError(
                f"{self.method}: non-finite residual", iteration, omega
            )
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SolveTimeoutError(
                f"{self.method}: deadline passed after {iteration} iterations", iteration
            )
        if self.reference is None:
            self.reference = residual
        elif residual > DIVERGENCE_FACTOR * self.reference:
            raise DivergenceError(
                f"{self.method}: residual {residual:.3e} exceeds "
                f"{DIVERGENCE_FACTOR:.0e} x initial {self.reference:.3e}",
                iteration,
                omega,
            )

        if not (force or iteration % self.stride == 0):
            return False
        self.history.append((iteration, residual))
        if self.debug:
            _LOGGER.debug(
                "%s iteration %d: residual %.6e (omega %.6g)",
                self.method,
                iteration,
                residual,
                omega,
            )
        return residual <= self.tolerance


def _converged_at_start(
    u: Field, problem: Problem, monitor: _Monitor
) -> bool:
    start = defect(u, problem)
    if start <= monitor.tolerance:
        monitor.history.append((0, start))
        _LOGGER.info("%s: initial guess already satisfies the tolerance", monitor.method)
        return True
    return False


def cjm_solve(
    problem: Problem,
    sigma: Optional[float] = None,
    cycle_size: Optional[int] = None,
    plan: Optional[OrderingPlan] = None,
    max_cycles: int = 1000,
    tolerance: float = 1e-10,
    stride: int = 1,
    initial: Optional[Field] = None,
    bounds: Optional[SpectralBounds] = None,
    seed: Optional[int] = None,
    deadline: Optional[float] = None,
) -> SolverReport:
    """Chebyshev-Jacobi method: repeat cycles of ``M`` optimally weighted sweeps.

    ``M`` comes from ``cycle_size`` or, failing that, is the smallest cycle that
    reduces every error mode by ``sigma``. ``bounds`` overrides the spectral
    interval of the problem, e.g. to reuse the weights of a larger domain.
    ``deadline`` works as in ``classic_solve``.
    """
    if (sigma is None) == (cycle_size is None):
        raise UsageError("Pass exactly one of sigma and cycle_size")
    if max_cycles < 1:
        raise ConfigurationError(f"max_cycles must be at least 1, got {max_cycles}")

    bounds = bounds or problem.kappa_bounds()
    if bounds.kappa_min <= 0.0:
        raise DegenerateIntervalError(
            "kappa_min is zero: the constant mode of a singular problem must be "
            "excluded before a Chebyshev schedule can be built"
        )
    M = cycle_size if cycle_size is not None else min_cycle_size(sigma, bounds)  # type: ignore
    schedule = make_weights(M, bounds)
    schedule = apply_ordering(schedule, plan or default_plan(schedule.M))
    profile = amplification_bound(schedule.M, bounds)

    _LOGGER.info(
        "CJM on %s: M=%d, kappa in [%.6g, %.6g], ordering %s, cycle bound %.3e",
        problem.name,
        schedule.M,
        bounds.kappa_min,
        bounds.kappa_max,
        schedule.ordering,
        profile.bound,
    )

    u = (initial.copy() if initial is not None else initial_guess(problem, seed))
    _check_field(u, problem)
    monitor = _Monitor("cjm", tolerance, stride, deadline)
    start = time.perf_counter()

    converged = _converged_at_start(u, problem, monitor)
    iteration = 0
    if not converged:
        sweeper = _Sweeper(problem, u.ghost)
        other = u.copy()
        for _ in range(max_cycles):
            for position, omega in enumerate(schedule.weights):
                residual = sweeper.jacobi(u, other, omega)
                u, other = other, u
                iteration += 1
                converged = monitor.check(
                    iteration, residual, omega, force=position == schedule.M - 1
                )
                if converged:
                    break
            if problem.grid.is_singular:
                remove_mean(u)
            if converged:
                break

    wall_time = time.perf_counter() - start
    fill_ghosts(u, problem.ghost)
    _LOGGER.info(
        "CJM finished after %d iterations (converged=%s) in %.3fs",
        iteration,
        converged,
        wall_time,
    )
    return SolverReport(
        method="cjm",
        history=tuple(monitor.history),
        iterations=iteration,
        converged=converged,
        wall_time=wall_time,
        predicted_bound=profile.bound,
        schedule=schedule,
        solution=u,
    )


def sor_optimal_omega(N: int) -> float:
    """Young's optimum ``2 / (1 + sin(pi / N))`` for ``N`` mesh intervals.

    Only valid for consistently ordered matrices such as the 5- and 7-point
    Laplacians with Dirichlet boundaries.
    """
    if N < 2:
        raise ConfigurationError(f"SOR optimum needs N >= 2, got {N}")
    return 2.0 / (1.0 + math.sin(math.pi / N))


def classic_solve(
    problem: Problem,
    method: str,
    omega: Optional[float] = None,
    tolerance: float = 1e-10,
    max_iterations: int = 200000,
    stride: int = 1,
    initial: Optional[Field] = None,
    seed: Optional[int] = None,
    deadline: Optional[float] = None,
) -> SolverReport:
    """Jacobi, Gauss-Seidel or SOR(``omega``) with lexicographic sweeps.

    ``deadline`` is a ``time.monotonic()`` instant; passing it stops the solve
    with ``SolveTimeoutError`` at the next residual check.
    """
    if method == METHOD_JACOBI:
        omega, label = 1.0, METHOD_JACOBI
    elif method == METHOD_GAUSS_SEIDEL:
        omega, label = 1.0, METHOD_GAUSS_SEIDEL
    elif method == METHOD_SOR:
        if omega is None:
            omega = sor_optimal_omega(max(problem.grid.zones))
        label = f"{METHOD_SOR}({omega:.6g})"
    else:
        raise ConfigurationError(f"Unknown classical method {method!r}")
    if not 0.0 < omega < 2.0:
        raise ConfigurationError(f"SOR needs 0 < omega < 2, got {omega}")
    if max_iterations < 1:
        raise ConfigurationError(f"max_iterations must be at least 1, got {max_iterations}")

    u = (initial.copy() if initial is not None else initial_guess(problem, seed))
    _check_field(u, problem)
    monitor = _Monitor(label, tolerance, stride, deadline)
    sweeper = _Sweeper(problem, u.ghost)
    singular = problem.grid.is_singular
    _LOGGER.info("%s on %s: omega %.6g", label, problem.name, omega)
    start = time.perf_counter()

    converged = _converged_at_start(u, problem, monitor)
    iteration = 0
    other = u.copy() if method == METHOD_JACOBI else u
    while not converged and iteration < max_iterations:
        if method == METHOD_JACOBI:
            residual = sweeper.jacobi(u, other, 1.0)
            u, other = other, u
        else:
            residual = sweeper.sor(u, omega)
        if singular:
            remove_mean(u)
        iteration += 1
        converged = monitor.check(
            iteration, residual, omega, force=iteration == max_iterations
        )

    wall_time = time.perf_counter() - start
    fill_ghosts(u, problem.ghost)
    _LOGGER.info(
        "%s finished after %d iterations (converged=%s) in %.3fs",
        label,
        iteration,
        converged,
        wall_time,
    )
    return SolverReport(
        method=label,
        history=tuple(monitor.history),
        iterations=iteration,
        converged=converged,
        wall_time=wall_time,
        solution=u,
    )


def write_history(report: SolverReport, target: Union[str, IO[str]]):
    """Residual history as two-column CSV ``iteration,residual``."""

    def _write(handle):
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RESIDUAL_CSV_HEADER)
        for iteration, residual in report.history:
            writer.writerow([iteration, repr(residual)])

    if isinstance(target, str):
        with open(target, "w", encoding="utf-8", newline="") as handle:
            _write(handle)
    else:
        _write(target)
