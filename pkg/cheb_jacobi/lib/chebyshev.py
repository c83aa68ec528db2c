"""Optimal relaxation weights and their amplification factors.

A cycle of ``M`` weighted-Jacobi sweeps multiplies the error mode with symbol
``kappa`` by ``G_M(kappa) = prod(1 - omega_n kappa)``. Placing the roots of
``G_M`` at the Chebyshev nodes of ``[kappa_min, kappa_max]`` gives

    G_M(kappa) = T_M(kt(kappa)) / T_M(kt(0)),
    kt(kappa) = 2 (kappa - kappa_min) / (kappa_max - kappa_min) - 1,

which is the smallest possible maximum over the interval. Outside
``[-1, 1]`` every ``T_M`` is evaluated as ``cosh(M arccosh |x|)`` in the log
domain so that no cycle size overflows.
"""
from dataclasses import dataclass
import logging
import math
from typing import IO, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import DegenerateIntervalError, UsageError
from .stencil import SpectralBounds

_LOGGER: logging.Logger = logging.getLogger(__package__)

_LOG_TOLERANCE = 1e-12
_LN2 = math.log(2.0)

NATURAL_ORDERING = "natural"


@dataclass(frozen=True, eq=False)
class WeightSchedule:
    """Relaxation weights in the order they are applied.

    ``permutation`` holds, for every scheduled position, the 1-based index of
    the weight in natural (descending) order. Schedules built by
    ``make_weights`` are Chebyshev schedules; ``from_weights`` wraps any
    positive weight sequence, for which only the product form applies.
    """

    weights: Tuple[float, ...]
    bounds: SpectralBounds
    ordering: str = NATURAL_ORDERING
    permutation: Tuple[int, ...] = ()
    chebyshev: bool = True

    def __post_init__(self):
        weights = tuple(float(weight) for weight in self.weights)
        if not weights:
            raise UsageError("A weight schedule needs at least one weight")
        if not all(math.isfinite(weight) and weight > 0.0 for weight in weights):
            raise UsageError("Relaxation weights must be finite and positive")
        object.__setattr__(self, "weights", weights)

        permutation = tuple(self.permutation) or tuple(range(1, len(weights) + 1))
        if sorted(permutation) != list(range(1, len(weights) + 1)):
            raise UsageError(
                f"Schedule permutation is not a bijection on 1..{len(weights)}"
            )
        object.__setattr__(self, "permutation", permutation)

    @classmethod
    def from_weights(
        cls,
        weights: Iterable[float],
        bounds: SpectralBounds,
        ordering: str = "explicit",
    ):
        return cls(tuple(weights), bounds, ordering=ordering, chebyshev=False)

    @property
    def M(self) -> int:
        return len(self.weights)

    @property
    def natural_weights(self) -> Tuple[float, ...]:
        natural = [0.0] * self.M
        for weight, index in zip(self.weights, self.permutation):
            natural[index - 1] = weight
        return tuple(natural)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


@dataclass(frozen=True)
class AmplificationProfile:
    M: int
    bound: float
    rate: float
    kappa_tilde_zero: float


def _require_interval(bounds: SpectralBounds):
    if bounds.kappa_max == bounds.kappa_min:
        raise DegenerateIntervalError(
            f"kappa_min equals kappa_max ({bounds.kappa_min}); the interval cannot be rescaled"
        )


def _require_positive(bounds: SpectralBounds):
    if bounds.kappa_min <= 0.0:
        raise DegenerateIntervalError(
            "kappa_min must be positive: the zero mode is never damped and no finite "
            "cycle reaches the requested reduction"
        )
    _require_interval(bounds)


def rescale_kappa(kappa, bounds: SpectralBounds):
    """Map ``[kappa_min, kappa_max]`` affinely onto ``[-1, 1]``."""
    _require_interval(bounds)
    width = bounds.kappa_max - bounds.kappa_min
    value = 2.0 * (np.asarray(kappa, dtype=float) - bounds.kappa_min) / width - 1.0
    return float(value) if np.ndim(value) == 0 else value


def _zero_excess(bounds: SpectralBounds) -> float:
    """``|kt(0)| - 1`` without the cancellation of subtracting one."""
    return 2.0 * bounds.kappa_min / (bounds.kappa_max - bounds.kappa_min)


def _arccosh_from_excess(excess):
    return np.log1p(excess + np.sqrt(excess * (2.0 + excess)))


def _log_cosh(t):
    return t + np.log1p(np.exp(-2.0 * t)) - _LN2


def _log_chebyshev_from_excess(M: int, excess):
    return _log_cosh(M * _arccosh_from_excess(excess))


def _check_order(M: int):
    if int(M) != M or M < 0:
        raise UsageError(f"Chebyshev order must be a non-negative integer, got {M}")


def log_abs_chebyshev(M: int, x) -> float:
    """``log |T_M(x)|`` for ``|x| >= 1``."""
    _check_order(M)
    magnitude = abs(float(x))
    if not magnitude >= 1.0:
        raise UsageError(
            f"log_abs_chebyshev needs |x| >= 1, got {x}; use the cosine form inside [-1, 1]"
        )
    return float(_log_chebyshev_from_excess(int(M), magnitude - 1.0))


def min_cycle_size(sigma: float, bounds: SpectralBounds) -> int:
    """Smallest ``M`` with ``1 / |T_M(kt(0))| <= sigma``."""
    if not 0.0 < sigma < 1.0:
        raise UsageError(f"Target reduction sigma must lie in (0, 1), got {sigma}")
    _require_positive(bounds)

    excess = _zero_excess(bounds)
    target = -math.log(sigma)

    def satisfied(M: int) -> bool:
        return _log_chebyshev_from_excess(M, excess) >= target - _LOG_TOLERANCE

    seed = math.acosh(1.0 / sigma) / float(_arccosh_from_excess(excess))
    M = max(1, math.ceil(seed))
    while M > 1 and satisfied(M - 1):
        M -= 1
    while not satisfied(M):
        M += 1

    _LOGGER.debug(
        "Cycle size for sigma=%g on [%g, %g]: %d (seed %.3f)",
        sigma,
        bounds.kappa_min,
        bounds.kappa_max,
        M,
        seed,
    )
    return M


def make_weights(M: int, bounds: SpectralBounds) -> WeightSchedule:
    """Chebyshev weights in natural order, ``omega_1 > ... > omega_M``."""
    if int(M) != M or M < 1:
        raise UsageError(f"Cycle size must be a positive integer, got {M}")
    M = int(M)

    n = np.arange(1, M + 1)
    nodes = np.cos(np.pi * (2 * n - 1) / (2 * M))
    weights = 2.0 / (
        bounds.kappa_max
        + bounds.kappa_min
        - (bounds.kappa_max - bounds.kappa_min) * nodes
    )
    return WeightSchedule(tuple(weights.tolist()), bounds)


def amplification_product(kappa, weights: Sequence[float]):
    """``prod(1 - omega kappa)`` evaluated directly."""
    kappa = np.asarray(kappa, dtype=float)
    factors = 1.0 - np.multiply.outer(kappa, np.asarray(weights, dtype=float))
    value = np.prod(factors, axis=-1)
    return float(value) if np.ndim(value) == 0 else value


def amplification(kappa, schedule: WeightSchedule):
    """Cycle amplification ``G_M(kappa)``.

    Chebyshev schedules use the closed form, as ``cos(M arccos kt)`` inside the
    interval and in the log domain outside it; other schedules fall back to
    the product.
    """
    if not schedule.chebyshev:
        return amplification_product(kappa, schedule.weights)

    bounds = schedule.bounds
    M = schedule.M
    scalar = np.ndim(kappa) == 0
    shape = np.shape(kappa)
    x = np.atleast_1d(np.asarray(rescale_kappa(kappa, bounds), dtype=float)).ravel()

    # T_M(kt(0)) has sign (-1)^M since kt(0) <= -1
    sign_zero = -1.0 if M % 2 else 1.0
    log_zero = _log_chebyshev_from_excess(M, _zero_excess(bounds))

    inside = np.abs(x) <= 1.0
    result = np.empty_like(x)
    result[inside] = (
        np.cos(M * np.arccos(x[inside])) * sign_zero * math.exp(-log_zero)
    )

    outside = ~inside
    if np.any(outside):
        x_out = x[outside]
        sign = np.where(x_out > 0.0, 1.0, sign_zero)
        log_value = _log_chebyshev_from_excess(M, np.abs(x_out) - 1.0)
        result[outside] = sign * sign_zero * np.exp(log_value - log_zero)

    return float(result[0]) if scalar else result.reshape(shape)


def per_iteration_factor(kappa, schedule: WeightSchedule):
    """Average damping per sweep, ``|G_M(kappa)|^(1/M)``."""
    return np.abs(amplification(kappa, schedule)) ** (1.0 / schedule.M)


def amplification_bound(M: int, bounds: SpectralBounds) -> AmplificationProfile:
    if int(M) != M or M < 1:
        raise UsageError(f"Cycle size must be a positive integer, got {M}")
    _require_positive(bounds)

    log_value = float(_log_chebyshev_from_excess(int(M), _zero_excess(bounds)))
    return AmplificationProfile(
        M=int(M),
        bound=math.exp(-log_value),
        rate=log_value / M,
        kappa_tilde_zero=rescale_kappa(0.0, bounds),
    )


def harmonic_mean(schedule: WeightSchedule) -> float:
    """Mean of the inverse weights, which equals ``(kappa_max + kappa_min) / 2``."""
    return math.fsum(1.0 / weight for weight in schedule.weights) / schedule.M


def geometric_mean_inverse(schedule: WeightSchedule) -> float:
    return math.exp(
        -math.fsum(math.log(weight) for weight in schedule.weights) / schedule.M
    )


def estimate_sor_omega(schedule: WeightSchedule, diagonal: Optional[float] = None) -> float:
    """Geometric mean of the weights, an estimate of the optimal SOR factor.

    Schedule weights scale the diagonal-preconditioned residual, so the
    estimate is positive and sign-free. Passing the stencil ``diagonal`` ``d``
    returns the step on the raw residual instead, ``omega / d``, with the sign
    convention of ``richardson_weight``.
    """
    omega = 1.0 / geometric_mean_inverse(schedule)
    if diagonal is None:
        return omega
    if diagonal == 0.0:
        raise UsageError("The stencil diagonal must be nonzero")
    return omega / diagonal


def sor_omega_limit(bounds: SpectralBounds) -> float:
    """Large-``M`` limit of ``estimate_sor_omega``."""
    return 4.0 / (math.sqrt(bounds.kappa_max) + math.sqrt(bounds.kappa_min)) ** 2


def richardson_weight(bounds: SpectralBounds, diagonal: float) -> float:
    """Optimal stationary Richardson step ``2 / (d (kappa_max + kappa_min))``.

    Its sign follows the stencil diagonal ``d``.
    """
    if diagonal == 0.0:
        raise UsageError("The stencil diagonal must be nonzero")
    return 2.0 / (diagonal * (bounds.kappa_max + bounds.kappa_min))


def write_schedule(schedule: WeightSchedule, target: Union[str, IO[str]]):
    """Export ``schedule`` as text, one weight per line in scheduled order."""
    lines = [
        f"# M = {schedule.M}",
        f"# kappa_min = {schedule.bounds.kappa_min!r}",
        f"# kappa_max = {schedule.bounds.kappa_max!r}",
        f"# ordering = {schedule.ordering}",
        "# permutation = " + " ".join(str(index) for index in schedule.permutation),
    ]
    lines += [repr(weight) for weight in schedule.weights]
    text = "\n".join(lines) + "\n"

    if isinstance(target, str):
        with open(target, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        target.write(text)


def read_schedule(source: Union[str, IO[str]]) -> WeightSchedule:
    """Parse a schedule written by ``write_schedule``."""
    if isinstance(source, str):
        with open(source, encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = source.read()

    header = {}
    weights = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            header[key.strip()] = value.strip()
            continue
        try:
            weights.append(float(line))
        except ValueError as err:
            raise UsageError(f"Line {number} of the schedule is not a weight: {line!r}") from err

    try:
        M = int(header["M"])
        bounds = SpectralBounds(
            kappa_min=float(header["kappa_min"]), kappa_max=float(header["kappa_max"])
        )
    except (KeyError, ValueError) as err:
        raise UsageError(f"Schedule header is incomplete or malformed: {err}") from err
    if M != len(weights):
        raise UsageError(f"Schedule header announces M={M} but holds {len(weights)} weights")

    permutation: Tuple[int, ...] = tuple(
        int(index) for index in header.get("permutation", "").split()
    )
    schedule = WeightSchedule(
        tuple(weights),
        bounds,
        ordering=header.get("ordering", NATURAL_ORDERING),
        permutation=permutation,
    )
    natural = make_weights(M, bounds).weights
    chebyshev = all(
        math.isclose(weight, expected, rel_tol=1e-12)
        for weight, expected in zip(schedule.natural_weights, natural)
    )
    if not chebyshev:
        _LOGGER.info("Schedule does not match the Chebyshev weights; using product form")
        return WeightSchedule(
            schedule.weights,
            bounds,
            ordering=schedule.ordering,
            permutation=schedule.permutation,
            chebyshev=False,
        )
    return schedule


def describe(schedule: WeightSchedule, sigma: Optional[float] = None) -> str:
    """Short human-readable summary used by the CLI."""
    bounds = schedule.bounds
    text = (
        f"M={schedule.M} kappa_min={bounds.kappa_min:.6g} kappa_max={bounds.kappa_max:.6g} "
        f"ordering={schedule.ordering} omega_max={max(schedule.weights):.6g} "
        f"omega_min={min(schedule.weights):.6g}"
    )
    if sigma is not None:
        text += f" sigma={sigma:g}"
    return text
