"""Run a matrix of solvers on one problem and collect comparable results."""
import asyncio
from asyncio import TimeoutError
import copy
import csv
from dataclasses import dataclass
from functools import partial
import logging
import os
import re
import time
from typing import IO, List, Optional, TypeVar, Union

import async_timeout

from .chebyshev import WeightSchedule, make_weights, min_cycle_size
from .config import ExperimentConfig, MethodRun
from .const import METHOD_CJM, METHOD_JACOBI, METHOD_SOR, SUMMARY_CSV_HEADER
from .exceptions import CjmError, DivergenceError, SolveTimeoutError
from .grid import Field
from .ordering import apply_ordering, next_power_of_two, plan_by_name
from .problems import build_problem, schedule_bounds
from .solver import (
    Problem,
    SolverReport,
    cjm_solve,
    classic_solve,
    initial_guess,
    sor_optimal_omega,
    write_history,
)
from .stencil import SpectralBounds

_LOGGER: logging.Logger = logging.getLogger(__package__)

Default = TypeVar("Default")


@dataclass
class BaseRun:
    label: str


@dataclass
class ValidRun(BaseRun):
    report: SolverReport


@dataclass
class InvalidRun(BaseRun):
    cause: str
    message: str = ""
    iteration: Optional[int] = None


Run = Union[ValidRun, InvalidRun]


def get_valid_report_or(
    run: Optional[Run], default: Default
) -> Union[SolverReport, Default]:
    if isinstance(run, ValidRun):
        return run.report
    else:
        return default


@dataclass
class ComparisonReport:
    problem: str
    runs: List[Run]

    @property
    def has_failures(self) -> bool:
        return any(
            isinstance(run, InvalidRun) or not run.report.converged for run in self.runs
        )

    def find(self, label: str) -> Optional[Run]:
        return next((run for run in self.runs if run.label == label), None)

    def speedup(self, run: Run) -> Optional[float]:
        """Jacobi iterations over the iterations of ``run``."""
        jacobi = get_valid_report_or(self.find(METHOD_JACOBI), None)
        report = get_valid_report_or(run, None)
        if jacobi is None or report is None or not jacobi.converged:
            return None
        if not report.converged or report.iterations == 0:
            return None
        return jacobi.iterations / report.iterations

    def iteration_table(self) -> List[List[str]]:
        rows = []
        for run in self.runs:
            report = get_valid_report_or(run, None)
            if report is None:
                rows.append([run.label, "-", run.cause, "-", "-", "-", "-"])  # type: ignore
                continue
            speedup = self.speedup(run)
            rows.append(
                [
                    run.label,
                    str(report.iterations),
                    "yes" if report.converged else "no",
                    repr(report.final_residual),
                    "-" if report.predicted_bound is None else repr(report.predicted_bound),
                    repr(report.achieved_reduction),
                    "-" if speedup is None else f"{speedup:.3f}",
                ]
            )
        return rows

    def write_summary_csv(self, target: Union[str, IO[str]]):
        def _write(handle):
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(SUMMARY_CSV_HEADER)
            writer.writerows(self.iteration_table())

        if isinstance(target, str):
            with open(target, "w", encoding="utf-8", newline="") as handle:
                _write(handle)
        else:
            _write(target)

    def format_table(self) -> str:
        """Aligned plain-text summary, including wall-clock times."""
        header = SUMMARY_CSV_HEADER[:3] + ["final_residual", "wall_time", "speedup_vs_jacobi"]
        rows = [header]
        for run, row in zip(self.runs, self.iteration_table()):
            report = get_valid_report_or(run, None)
            wall_time = "-" if report is None else f"{report.wall_time:.3f}s"
            final = row[3] if report is None else f"{report.final_residual:.3e}"
            rows.append(row[:3] + [final, wall_time, row[6]])

        widths = [max(len(row[column]) for row in rows) for column in range(len(header))]
        lines = [f"problem: {self.problem}"]
        for row in rows:
            lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
        return "\n".join(lines) + "\n"


def file_label(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9.]+", "-", label).strip("-")


def cycle_size(config: ExperimentConfig, bounds: SpectralBounds) -> int:
    M = config.cycle_size or min_cycle_size(config.sigma, bounds)
    if config.round_to_power_of_two:
        M = next_power_of_two(M)
    return M


def build_schedule(config: ExperimentConfig, problem: Problem) -> WeightSchedule:
    """Ordered CJM weights for ``problem`` as configured."""
    bounds = schedule_bounds(config, problem)
    M = cycle_size(config, bounds)
    return apply_ordering(make_weights(M, bounds), plan_by_name(config.ordering, M))


def _resolve_runs(config: ExperimentConfig, problem: Problem) -> List[MethodRun]:
    runs = config.method_runs()
    for run in runs:
        if run.method == METHOD_SOR and run.omega is None:
            run.omega = sor_optimal_omega(max(problem.grid.zones))
    return runs


def _solve(
    config: ExperimentConfig,
    problem: Problem,
    run: MethodRun,
    initial: Field,
    schedule: Optional[WeightSchedule],
    deadline: Optional[float] = None,
) -> SolverReport:
    if run.method == METHOD_CJM:
        assert schedule is not None
        return cjm_solve(
            problem,
            cycle_size=schedule.M,
            plan=plan_by_name(config.ordering, schedule.M),
            max_cycles=config.max_cycles,
            tolerance=config.tolerance,
            stride=config.stride,
            initial=initial,
            bounds=schedule.bounds,
            deadline=deadline,
        )
    return classic_solve(
        problem,
        run.method,
        omega=run.omega,
        tolerance=config.tolerance,
        max_iterations=config.max_iterations,
        stride=config.stride,
        initial=initial,
        deadline=deadline,
    )


async def _async_run(
    config: ExperimentConfig,
    problem: Problem,
    run: MethodRun,
    initial: Field,
    schedule: Optional[WeightSchedule],
    semaphore: asyncio.Semaphore,
) -> Run:
    label = run.label
    async with semaphore:
        loop = asyncio.get_running_loop()
        # the executor thread cannot be cancelled; the deadline stops the solve itself
        deadline = time.monotonic() + config.timeout if config.timeout else None
        try:
            async with async_timeout.timeout(config.timeout or None):
                report = await loop.run_in_executor(
                    None,
                    partial(
                        _solve,
                        config,
                        copy.deepcopy(problem),
                        run,
                        initial.copy(),
                        schedule,
                        deadline,
                    ),
                )
        except (TimeoutError, SolveTimeoutError):
            _LOGGER.warning("%s timed out after %gs", label, config.timeout)
            return InvalidRun(label=label, cause="TIMEOUT")
        except DivergenceError as exc:
            _LOGGER.warning("%s diverged: %s", label, exc)
            return InvalidRun(
                label=label, cause="DIVERGED", message=str(exc), iteration=exc.iteration
            )
        except CjmError as exc:
            _LOGGER.warning("%s failed: %s", label, exc)
            return InvalidRun(label=label, cause=type(exc).__name__, message=str(exc))

    return ValidRun(label=label, report=report)


async def async_run_experiment(config: ExperimentConfig) -> ComparisonReport:
    problem = build_problem(config)
    runs = _resolve_runs(config, problem)
    schedule = (
        build_schedule(config, problem)
        if any(run.method == METHOD_CJM for run in runs)
        else None
    )
    initial = initial_guess(problem, config.seed)
    semaphore = asyncio.Semaphore(config.concurrency)

    results = await asyncio.gather(
        *[
            _async_run(config, problem, run, initial, schedule, semaphore)
            for run in runs
        ]
    )
    return ComparisonReport(problem=problem.name, runs=list(results))


def write_outputs(report: ComparisonReport, output_dir: str):
    """One residual CSV per valid run plus ``summary.csv`` and ``summary.txt``."""
    os.makedirs(output_dir, exist_ok=True)
    for run in report.runs:
        solver_report = get_valid_report_or(run, None)
        if solver_report is not None:
            write_history(
                solver_report, os.path.join(output_dir, f"{file_label(run.label)}.csv")
            )
    report.write_summary_csv(os.path.join(output_dir, "summary.csv"))
    with open(os.path.join(output_dir, "summary.txt"), "w", encoding="utf-8") as handle:
        handle.write(report.format_table())


def run_experiment(config: ExperimentConfig, write: bool = True) -> ComparisonReport:
    report = asyncio.run(async_run_experiment(config))
    if write:
        write_outputs(report, config.output_dir)
        _LOGGER.info("Wrote results for %d runs to %s", len(report.runs), config.output_dir)
    return report
