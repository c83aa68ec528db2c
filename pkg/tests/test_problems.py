"""Tests for the model problems."""
import logging
import math

import numpy as np
import pytest

from cheb_jacobi.lib.config import ExperimentConfig
from cheb_jacobi.lib.const import AxisLayout
from cheb_jacobi.lib.exceptions import ConfigurationError
from cheb_jacobi.lib.experiment import run_experiment
from cheb_jacobi.lib.grid import BoundaryCondition, Field, Grid
from cheb_jacobi.lib.problems import (
    build_problem,
    discretization_error,
    exp_solution,
    exp_source,
    exp_source_laplacian,
    is_fourth_order_compact,
    schedule_bounds,
    sphere_potential,
    sphere_source,
)
from cheb_jacobi.lib.solver import sor_optimal_omega
from cheb_jacobi.lib.stencil import StencilSpec, kappa_bounds

from .oracle import solve_sparse


def _config(**user_input):
    return ExperimentConfig.from_user_input(user_input)


def test_exp_functions():
    assert exp_solution(0.0, 0.0) == -1.0
    assert exp_source(0.0, 0.0) == 0.0
    assert exp_source_laplacian(0.0, 0.0) == -4.0
    assert exp_source(1.0, 1.0) == pytest.approx(-2 * math.e)


def test_exp_source_is_laplacian_of_solution():
    h = 1e-3
    x, y = 0.3, 0.7
    laplacian = (
        exp_solution(x + h, y)
        + exp_solution(x - h, y)
        + exp_solution(x, y + h)
        + exp_solution(x, y - h)
        - 4 * exp_solution(x, y)
    ) / h ** 2
    assert laplacian == pytest.approx(exp_source(x, y), rel=1e-5)

    source_laplacian = (
        exp_source(x + h, y)
        + exp_source(x - h, y)
        + exp_source(x, y + h)
        + exp_source(x, y - h)
        - 4 * exp_source(x, y)
    ) / h ** 2
    assert source_laplacian == pytest.approx(exp_source_laplacian(x, y), rel=1e-5)


def test_sphere_potential():
    potential = sphere_potential(2.0, 0.5)
    assert potential(0.5, 0.0, 0.0) == pytest.approx(4.0)
    assert potential(0.0, 0.0, 0.0) == pytest.approx(6.0)
    assert potential(0.0, 2.0, 0.0) == pytest.approx(1.0)
    assert potential(0.4999999, 0.0, 0.0) == pytest.approx(potential(0.5000001, 0.0, 0.0))

    silent = sphere_potential(0.0, 0.5)
    assert silent(0.1, 0.2, 0.3) == 0.0
    assert silent(1.0, 1.0, 1.0) == 0.0


def test_sphere_source():
    source = sphere_source(2.0, 0.5)
    assert source(0.1, 0.0, 0.0) == pytest.approx(-3 * 2.0 / 0.5 ** 3)
    assert source(0.6, 0.0, 0.0) == 0.0


def test_fourth_order_detection():
    assert is_fourth_order_compact(StencilSpec.nine_point())
    assert is_fourth_order_compact(StencilSpec.general_combo(4, 6))
    assert not is_fourth_order_compact(StencilSpec.general_combo(1, 2))
    assert not is_fourth_order_compact(StencilSpec.five_point())
    assert not is_fourth_order_compact(StencilSpec.seventeen_point())


def test_laplace_neumann_problem():
    problem = build_problem(_config(problem="laplace2d-neumann", n=16))
    assert problem.name == "laplace2d-neumann"
    assert problem.grid.is_singular
    assert problem.grid.shape == (16, 16)
    assert np.all(problem.rhs_values == 0.0)
    assert problem.analytic is None

    with pytest.raises(ConfigurationError):
        discretization_error(problem, problem.new_field())


def test_poisson_exp_problem():
    problem = build_problem(_config(problem="poisson2d-exp", n=17))
    assert problem.grid.layouts == (AxisLayout.VERTEX, AxisLayout.VERTEX)
    assert problem.grid.h == (1 / 16, 1 / 16)
    assert problem.rhs_values[0, 0] == pytest.approx(exp_source(1 / 16, 1 / 16))


def test_nine_point_source_correction():
    five = build_problem(_config(problem="poisson2d-exp", n=17))
    nine = build_problem(_config(problem="poisson2d-exp", n=17, stencil="nine-point"))
    h = 1 / 16
    correction = h * h / 12 * exp_source_laplacian(h, 2 * h)
    assert nine.rhs_values[0, 1] - five.rhs_values[0, 1] == pytest.approx(correction)


def test_sphere_problem_full_domain():
    problem = build_problem(_config(problem="poisson3d-sphere", n=9))
    grid = problem.grid
    assert problem.name == "poisson3d-sphere"
    assert problem.stencil == StencilSpec.seven_point()
    assert grid.origin == (-0.5, -0.5, -0.5)
    assert grid.shape == (7, 7, 7)
    # the centre node carries the source of the ball of radius 1/4
    assert problem.rhs_values[3, 3, 3] == pytest.approx(-3 / 0.25 ** 3)
    assert problem.rhs_values[0, 0, 0] == 0.0


def test_sphere_problem_octant():
    problem = build_problem(_config(problem="poisson3d-sphere", n=8, octant=True))
    grid = problem.grid
    assert problem.name == "poisson3d-sphere-octant"
    assert grid.extent == (0.5, 0.5, 0.5)
    assert grid.layouts == (AxisLayout.CELL,) * 3
    assert grid.h == (0.0625, 0.0625, 0.0625)
    for low, high in grid.faces:
        assert low.is_neumann
        assert not high.is_neumann
    assert not grid.is_singular


def test_octant_schedule_bounds():
    problem_config = _config(problem="poisson3d-sphere", n=8, octant=True)
    full_config = _config(
        problem="poisson3d-sphere", n=8, octant=True, schedule_bounds="full-domain"
    )
    problem = build_problem(problem_config)

    own = schedule_bounds(problem_config, problem)
    full = schedule_bounds(full_config, problem)
    cube = Grid.uniform(3, 16, BoundaryCondition.dirichlet(sphere_potential(1.0, 0.25)))

    assert own == problem.kappa_bounds()
    assert full == kappa_bounds(StencilSpec.seven_point(), cube)
    assert full.kappa_min != own.kappa_min
    assert full.kappa_max == own.kappa_max == 2.0


def test_full_domain_bounds_warning(caplog):
    with caplog.at_level(logging.WARNING):
        config = _config(problem="poisson3d-sphere", n=8, schedule_bounds="full-domain")
    assert "no effect" in caplog.text
    problem = build_problem(config)
    assert schedule_bounds(config, problem) == problem.kappa_bounds()


def test_unknown_problem():
    config = ExperimentConfig()
    config.problem = "heat2d"
    with pytest.raises(ConfigurationError):
        build_problem(config)


def test_build_problem_logs(caplog):
    with caplog.at_level(logging.INFO):
        build_problem(_config(problem="poisson2d-exp", n=9))
    assert "Built poisson2d-exp: 7x7 unknowns" in caplog.text


def test_discretization_error():
    problem = build_problem(_config(problem="poisson2d-exp", n=9))
    exact = Field.from_function(problem.grid, exp_solution)
    assert discretization_error(problem, exact) == 0.0

    exact.values[2, 2] += 0.25
    assert discretization_error(problem, exact) == pytest.approx(0.25)


def _exp_error(stencil: str, n: int) -> float:
    problem = build_problem(_config(problem="poisson2d-exp", n=n, stencil=stencil))
    solution = solve_sparse(problem.stencil, problem.grid, problem.rhs_values)
    return discretization_error(problem, Field.from_interior(problem.grid, solution))


def test_convergence_orders():
    """The corrected 9-point scheme is fourth order, the 5-point scheme second order."""
    nine_order = math.log2(_exp_error("nine-point", 33) / _exp_error("nine-point", 65))
    five_order = math.log2(_exp_error("five-point", 33) / _exp_error("five-point", 65))

    assert nine_order >= 3.5
    assert 1.8 <= five_order <= 2.2


def test_nine_point_error_ratio():
    """Halving h cuts the 9-point error by roughly 2^4."""
    ratio = _exp_error("nine-point", 17) / _exp_error("nine-point", 33)
    assert 12 <= ratio <= 22


@pytest.mark.slow
def test_sphere_method_comparison(tmp_path):
    config = _config(
        problem="poisson3d-sphere",
        n=64,
        methods="cjm, jacobi, sor",
        sigma=1e-12,
        tolerance=1e-10,
        output_dir=str(tmp_path),
    )
    report = run_experiment(config, write=False)
    assert not report.has_failures

    jacobi = report.find("jacobi").report.iterations
    cjm = report.find("cjm").report.iterations
    sor = report.runs[2].report.iterations
    assert cjm < jacobi / 10
    assert sor < jacobi / 10
    assert cjm <= 2.5 * sor


@pytest.mark.slow
@pytest.mark.parametrize("bounds", ["problem", "full-domain"])
def test_sphere_octant_beats_sor_sweep(bounds, tmp_path):
    config = _config(
        problem="poisson3d-sphere",
        n=64,
        octant=True,
        schedule_bounds=bounds,
        methods="cjm, sor",
        sor_omegas="1.90, 1.93, 1.95, 1.97",
        sigma=1e-10,
        tolerance=1e-10,
        output_dir=str(tmp_path),
    )
    report = run_experiment(config, write=False)
    assert not report.has_failures

    cjm = report.find("cjm").report.iterations
    sor = {run.label: run.report.iterations for run in report.runs[1:]}
    assert list(sor) == ["sor(1.9)", "sor(1.93)", "sor(1.95)", "sor(1.97)"]
    assert all(cjm < iterations for iterations in sor.values())


@pytest.mark.slow
def test_exp_cjm_close_to_optimal_sor(tmp_path):
    config = _config(
        problem="poisson2d-exp",
        n=129,
        methods="cjm, sor",
        sor_omegas=str(sor_optimal_omega(128)),
        sigma=1e-12,
        tolerance=1e-10,
        output_dir=str(tmp_path),
    )
    report = run_experiment(config, write=False)
    assert not report.has_failures

    # about twice optimal SOR: rate pi/N per sweep against 2 pi/N
    cjm, sor = (run.report.iterations for run in report.runs)
    assert cjm <= 2.1 * sor
