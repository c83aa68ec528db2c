"""Self-checks of the weight, ordering and bound machinery.

Each suite returns ``CheckResult`` records; a failed check is a result, not
an exception. ``format_results`` renders them as CSV lines
``suite,check,status,error,tolerance``.
"""
import csv
from dataclasses import dataclass
import io
import logging
import math
from typing import Callable, Dict, Iterable, List

import numpy as np

from .chebyshev import (
    amplification,
    amplification_bound,
    amplification_product,
    estimate_sor_omega,
    geometric_mean_inverse,
    harmonic_mean,
    make_weights,
    rescale_kappa,
    sor_omega_limit,
)
from .const import SUITES
from .exceptions import UsageError
from .grid import BoundaryCondition, Grid
from .ordering import interleaved, lebedev_finogenov
from .solver import sor_optimal_omega
from .stencil import SpectralBounds, StencilSpec, kappa_bounds

_LOGGER: logging.Logger = logging.getLogger(__package__)

PRINTED_ORDERINGS = {
    1: (1, 2),
    2: (1, 4, 2, 3),
    3: (1, 8, 4, 5, 2, 7, 3, 6),
    4: (1, 16, 8, 9, 4, 13, 5, 12, 2, 15, 7, 10, 3, 14, 6, 11),
}
NEUMANN_256_KAPPA_MIN = 3.76491e-5
CYCLE_TARGETS = ((1939, 1e-6), (2470, 1e-8), (3000, 1e-10))


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.error) and self.error <= self.tolerance


def _relative(value: float, expected: float) -> float:
    return abs(value - expected) / abs(expected)


def _neumann_256_bounds() -> SpectralBounds:
    grid = Grid.uniform(2, 256, BoundaryCondition.neumann())
    return kappa_bounds(StencilSpec.five_point(), grid)


def _equioscillation_error(M: int, bounds: SpectralBounds) -> float:
    schedule = make_weights(M, bounds)
    extrema = 0.5 * (
        bounds.kappa_max
        + bounds.kappa_min
        + (bounds.kappa_max - bounds.kappa_min) * np.cos(np.pi * np.arange(M + 1) / M)
    )
    samples = np.concatenate(
        [np.linspace(bounds.kappa_min, bounds.kappa_max, 100_000), extrema]
    )
    bound = amplification_bound(M, bounds).bound
    peak = float(np.max(np.abs(amplification(samples, schedule))))

    at_extrema = amplification(extrema, schedule)
    alternating = bool(np.all(np.sign(at_extrema[1:]) == -np.sign(at_extrema[:-1])))
    return _relative(peak, bound) if alternating else math.inf


def check_weights() -> List[CheckResult]:
    bounds = SpectralBounds(0.05, 2.0)
    results = []

    worst = 0.0
    for M in (1, 2, 7, 64, 1000):
        weights = np.asarray(make_weights(M, bounds).weights)
        if np.any(np.diff(weights) >= 0.0):
            worst = math.inf
        expected = 2.0 / (
            bounds.kappa_max
            + bounds.kappa_min
            - (bounds.kappa_max - bounds.kappa_min) * math.cos(math.pi / (2 * M))
        )
        worst = max(worst, _relative(weights[0], expected))
    results.append(CheckResult("weights", "descending_and_largest", worst, 1e-14))

    single = make_weights(1, bounds).weights[0]
    results.append(
        CheckResult(
            "weights",
            "single_weight",
            _relative(single, 2.0 / (bounds.kappa_max + bounds.kappa_min)),
            1e-14,
        )
    )

    pair = make_weights(2, SpectralBounds(0.0, 2.0)).weights
    expected_pair = (1.0 / (1.0 - math.sqrt(0.5)), 1.0 / (1.0 + math.sqrt(0.5)))
    results.append(
        CheckResult(
            "weights",
            "two_weights",
            max(_relative(w, e) for w, e in zip(pair, expected_pair)),
            1e-14,
        )
    )

    for M in (4, 8, 16, 32):
        results.append(
            CheckResult(
                "weights", f"equioscillation_m{M}", _equioscillation_error(M, bounds), 1e-8
            )
        )

    schedule = make_weights(8, SpectralBounds(0.1, 2.0))
    closed = amplification(0.7, schedule)
    product = amplification_product(0.7, schedule.weights)
    results.append(
        CheckResult("weights", "closed_form_vs_product", abs(closed - product), 1e-12)
    )
    return results


def check_orderings() -> List[CheckResult]:
    results = []
    for r, printed in PRINTED_ORDERINGS.items():
        mismatches = sum(
            1 for got, want in zip(lebedev_finogenov(r).perm, printed) if got != want
        )
        results.append(
            CheckResult("orderings", f"lebedev_finogenov_{2 ** r}", float(mismatches), 0.0)
        )

    broken = 0
    for M in range(1, 257):
        perm = interleaved(M).perm
        if sorted(perm) != list(range(1, M + 1)):
            broken += 1
    results.append(CheckResult("orderings", "interleaved_bijection", float(broken), 0.0))

    unpaired = 0
    r = 6
    perm = lebedev_finogenov(r).perm
    for position in range(0, len(perm), 2):
        if perm[position] + perm[position + 1] != 2 ** r + 1:
            unpaired += 1
    results.append(CheckResult("orderings", "lebedev_finogenov_pairs", float(unpaired), 0.0))
    return results


def check_bounds() -> List[CheckResult]:
    bounds = _neumann_256_bounds()
    results = [
        CheckResult(
            "bounds",
            "neumann_256_kappa_min",
            _relative(bounds.kappa_min, NEUMANN_256_KAPPA_MIN),
            1e-5,
        ),
        CheckResult("bounds", "neumann_256_kappa_max", abs(bounds.kappa_max - 2.0), 1e-14),
        CheckResult(
            "bounds",
            "neumann_256_kappa_tilde_zero",
            0.0 if f"{rescale_kappa(0.0, bounds):.6g}" == "-1.00004" else 1.0,
            0.0,
        ),
    ]

    dirichlet = Grid.uniform(2, 64, BoundaryCondition.dirichlet(lambda x, y: 0.0 * x))
    for spec, expected in (
        (StencilSpec.five_point(), 2.0),
        (StencilSpec.nine_point(), 8.0 / 5.0),
        (StencilSpec.seventeen_point(), 64.0 / 45.0),
    ):
        kappa_max = kappa_bounds(spec, dirichlet).kappa_max
        results.append(
            CheckResult(
                "bounds", f"{spec.family.value}_kappa_max", abs(kappa_max - expected), 1e-14
            )
        )

    for M, target in CYCLE_TARGETS:
        results.append(
            CheckResult(
                "bounds", f"cycle_bound_m{M}", amplification_bound(M, bounds).bound, target
            )
        )
    return results


def check_theorems() -> List[CheckResult]:
    bounds = SpectralBounds(0.01, 2.0)
    results = []
    for M in (3, 16, 1000, 10000):
        mean = harmonic_mean(make_weights(M, bounds))
        expected = (bounds.kappa_max + bounds.kappa_min) / 2.0
        results.append(
            CheckResult("theorems", f"harmonic_mean_m{M}", _relative(mean, expected), 1e-12)
        )

    limit = ((math.sqrt(bounds.kappa_max) + math.sqrt(bounds.kappa_min)) / 2.0) ** 2
    means = [geometric_mean_inverse(make_weights(2 ** r, bounds)) for r in range(4, 15)]
    increases = sum(
        1 for prev, cur in zip(means, means[1:]) if cur > prev * (1.0 + 1e-12)
    )
    results.append(
        CheckResult("theorems", "geometric_mean_decreasing", float(increases), 0.0)
    )
    results.append(
        CheckResult(
            "theorems", "geometric_mean_limit", _relative(means[-1], limit), 1e-3
        )
    )

    schedule = make_weights(2 ** 14, bounds)
    results.append(
        CheckResult(
            "theorems",
            "sor_estimate_converges",
            _relative(estimate_sor_omega(schedule), sor_omega_limit(bounds)),
            1e-3,
        )
    )

    N = 128
    young = SpectralBounds(2.0 * math.sin(math.pi / (2 * N)) ** 2, 2.0)
    results.append(
        CheckResult(
            "theorems",
            "sor_estimate_matches_young_n128",
            _relative(sor_omega_limit(young), sor_optimal_omega(N)),
            2e-4,
        )
    )
    return results


_SUITES: Dict[str, Callable[[], List[CheckResult]]] = {
    "weights": check_weights,
    "orderings": check_orderings,
    "bounds": check_bounds,
    "theorems": check_theorems,
}


def verify(suite: str) -> List[CheckResult]:
    if suite not in _SUITES:
        raise UsageError(f"Unknown suite {suite!r}; expected one of {', '.join(SUITES)}")

    results = _SUITES[suite]()
    failed = [result.name for result in results if not result.passed]
    if failed:
        _LOGGER.warning("Suite %s: %d checks failed: %s", suite, len(failed), ", ".join(failed))
    else:
        _LOGGER.info("Suite %s: all %d checks passed", suite, len(results))
    return results


def format_results(results: Iterable[CheckResult]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["suite", "check", "status", "error", "tolerance"])
    for result in results:
        writer.writerow(
            [
                result.suite,
                result.name,
                "PASS" if result.passed else "FAIL",
                f"{result.error:.3e}",
                f"{result.tolerance:.1e}",
            ]
        )
    return buffer.getvalue()
