"""Command-line entry point: ``cheb-jacobi <command> [options]``."""
import argparse
import logging
import sys
from typing import List, Optional

from .lib.chebyshev import (
    amplification_bound,
    describe,
    estimate_sor_omega,
    sor_omega_limit,
    write_schedule,
)
from .lib.config import ExperimentConfig
from .lib.const import (
    EXIT_CONFIGURATION_ERROR,
    EXIT_FAILURE,
    EXIT_OK,
    METHODS,
    STARTUP_MESSAGE,
    SUITES,
    VERSION,
)
from .lib.exceptions import (
    CjmError,
    ConfigurationError,
    DegenerateIntervalError,
    UsageError,
)
from .lib.experiment import build_schedule, run_experiment
from .lib.problems import build_problem
from .lib.verify import format_results, verify

_LOGGER: logging.Logger = logging.getLogger(__package__)


def _add_config_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("-c", "--config", help="key = value configuration file")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a configuration key (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cheb-jacobi",
        description="Chebyshev-weighted Jacobi solvers for structured-grid Poisson problems",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    weights = commands.add_parser("weights", help="write the CJM weight schedule")
    _add_config_arguments(weights)
    weights.add_argument("-o", "--output", help="schedule file (default: stdout)")

    solve = commands.add_parser("solve", help="run a single method")
    _add_config_arguments(solve)
    solve.add_argument("-m", "--method", choices=METHODS, default=METHODS[0])
    solve.add_argument("--omega", type=float, help="relaxation factor for sor")

    bench = commands.add_parser("bench", help="run the configured method matrix")
    _add_config_arguments(bench)

    check = commands.add_parser("verify", help="run self-check suites")
    check.add_argument(
        "-s",
        "--suite",
        dest="suites",
        action="append",
        choices=SUITES,
        help="suite to run (repeatable, default: all)",
    )

    predict = commands.add_parser(
        "predict", help="print the cycle size and its predicted reduction"
    )
    _add_config_arguments(predict)
    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _load(args) -> ExperimentConfig:
    return ExperimentConfig.load(args.config, args.overrides)


def _weights(args) -> int:
    config = _load(args)
    schedule = build_schedule(config, build_problem(config))
    write_schedule(schedule, args.output or sys.stdout)
    if args.output:
        print(describe(schedule))
    return EXIT_OK


def _solve(args, single: bool) -> int:
    overrides = list(args.overrides)
    if single:
        overrides.append(f"methods={args.method}")
        if args.omega is not None:
            overrides.append(f"sor_omegas={args.omega}")
    config = ExperimentConfig.load(args.config, overrides)

    report = run_experiment(config)
    print(report.format_table(), end="")
    return EXIT_FAILURE if report.has_failures else EXIT_OK


def _verify(args) -> int:
    results = []
    for suite in args.suites or SUITES:
        results.extend(verify(suite))
    print(format_results(results), end="")
    return EXIT_OK if all(result.passed for result in results) else EXIT_FAILURE


def _predict(args) -> int:
    config = _load(args)
    problem = build_problem(config)
    schedule = build_schedule(config, problem)
    profile = amplification_bound(schedule.M, schedule.bounds)

    print(f"problem            {problem.name}")
    print(f"kappa_min          {schedule.bounds.kappa_min:.6e}")
    print(f"kappa_max          {schedule.bounds.kappa_max:.6e}")
    print(f"kappa_tilde_zero   {profile.kappa_tilde_zero:.8f}")
    print(f"cycle_size         {schedule.M}")
    print(f"ordering           {schedule.ordering}")
    print(f"cycle_bound        {profile.bound:.6e}")
    print(f"rate               {profile.rate:.6e}")
    print(f"sor_omega_estimate {estimate_sor_omega(schedule):.6f}")
    print(f"sor_omega_limit    {sor_omega_limit(schedule.bounds):.6f}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    _LOGGER.info(STARTUP_MESSAGE)

    try:
        if args.command == "weights":
            return _weights(args)
        if args.command == "solve":
            return _solve(args, single=True)
        if args.command == "bench":
            return _solve(args, single=False)
        if args.command == "verify":
            return _verify(args)
        return _predict(args)
    except (ConfigurationError, UsageError, DegenerateIntervalError) as exc:
        _LOGGER.error("%s", exc)
        return EXIT_CONFIGURATION_ERROR
    except CjmError as exc:
        _LOGGER.error("%s", exc)
        return EXIT_FAILURE
