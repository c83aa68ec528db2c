"""Orders in which the weights of a cycle are applied.

Applying the largest weights back to back amplifies round-off in the
high-frequency modes by their product; a good ordering alternates large and
small weights so that partial products stay bounded.
"""
from dataclasses import dataclass
from enum import Enum
import math
from typing import Iterable, List, Sequence, Tuple

from .chebyshev import WeightSchedule
from .exceptions import UsageError

MAX_DOUBLING_LEVEL = 30


class OrderingName(str, Enum):
    LEBEDEV_FINOGENOV = "lebedev-finogenov"
    NATURAL = "natural"
    INTERLEAVED = "interleaved"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class OrderingPlan:
    """A 1-based permutation: position ``k`` applies weight ``perm[k]``."""

    name: OrderingName
    perm: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "name", OrderingName(self.name))
        perm = tuple(int(index) for index in self.perm)
        object.__setattr__(self, "perm", perm)

        if not perm:
            raise UsageError("An ordering plan needs at least one index")
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise UsageError(f"Ordering is not a permutation of 1..{len(perm)}: {perm}")
        if self.name == OrderingName.LEBEDEV_FINOGENOV and not is_power_of_two(len(perm)):
            raise UsageError(
                f"Lebedev-Finogenov orderings need a power-of-two length, got {len(perm)}"
            )

    @property
    def M(self) -> int:
        return len(self.perm)


def is_power_of_two(value: int) -> bool:
    return value >= 1 and value & (value - 1) == 0


def next_power_of_two(value: int) -> int:
    if value < 1:
        raise UsageError(f"Expected a positive integer, got {value}")
    return 1 << (value - 1).bit_length()


def _double(perm: Sequence[int], size: int) -> List[int]:
    """Pair every index ``j`` with its mirror ``size + 1 - j``."""
    doubled: List[int] = []
    for index in perm:
        mirror = size + 1 - index
        doubled.append(index)
        if mirror != index:
            doubled.append(mirror)
    return doubled


def lebedev_finogenov(r: int) -> OrderingPlan:
    if int(r) != r or not 0 <= r <= MAX_DOUBLING_LEVEL:
        raise UsageError(
            f"Doubling level must be an integer in [0, {MAX_DOUBLING_LEVEL}], got {r}"
        )

    perm = [1]
    for level in range(1, int(r) + 1):
        perm = _double(perm, 2 ** level)
    return OrderingPlan(OrderingName.LEBEDEV_FINOGENOV, tuple(perm))


def interleaved(M: int) -> OrderingPlan:
    """Bisection interleave for any ``M``; equal to Lebedev-Finogenov when ``M = 2^r``.

    The plan for ``M`` is built from the plan for ``ceil(M / 2)`` by pairing
    each index with its mirror in ``1..M``; for odd ``M`` the middle index is
    its own mirror and appears once.
    """
    if int(M) != M or M < 1:
        raise UsageError(f"Cycle size must be a positive integer, got {M}")

    sizes = [int(M)]
    while sizes[-1] > 1:
        sizes.append(math.ceil(sizes[-1] / 2))

    perm = [1]
    for size in reversed(sizes[:-1]):
        perm = _double(perm, size)
    return OrderingPlan(OrderingName.INTERLEAVED, tuple(perm))


def natural(M: int) -> OrderingPlan:
    if int(M) != M or M < 1:
        raise UsageError(f"Cycle size must be a positive integer, got {M}")
    return OrderingPlan(OrderingName.NATURAL, tuple(range(1, int(M) + 1)))


def explicit(perm: Iterable[int]) -> OrderingPlan:
    return OrderingPlan(OrderingName.EXPLICIT, tuple(perm))


def default_plan(M: int) -> OrderingPlan:
    if is_power_of_two(M):
        return lebedev_finogenov(int(M).bit_length() - 1)
    return interleaved(M)


def plan_by_name(name: str, M: int) -> OrderingPlan:
    """Resolve a configured ordering name for a cycle of size ``M``."""
    if name == "default":
        return default_plan(M)
    try:
        ordering = OrderingName(name)
    except ValueError as err:
        raise UsageError(f"Unknown ordering {name!r}") from err

    if ordering == OrderingName.LEBEDEV_FINOGENOV:
        if not is_power_of_two(M):
            raise UsageError(
                f"Lebedev-Finogenov ordering needs a power-of-two cycle, got M={M}"
            )
        return lebedev_finogenov(int(M).bit_length() - 1)
    if ordering == OrderingName.INTERLEAVED:
        return interleaved(M)
    if ordering == OrderingName.NATURAL:
        return natural(M)
    raise UsageError("Explicit orderings must be given as an index list")


def apply_ordering(schedule: WeightSchedule, plan: OrderingPlan) -> WeightSchedule:
    """Permute the scheduled weights; position ``k`` gets current weight ``perm[k]``."""
    if plan.M != schedule.M:
        raise UsageError(
            f"Ordering of length {plan.M} does not fit a schedule of {schedule.M} weights"
        )

    weights = tuple(schedule.weights[index - 1] for index in plan.perm)
    permutation = tuple(schedule.permutation[index - 1] for index in plan.perm)
    return WeightSchedule(
        weights,
        schedule.bounds,
        ordering=plan.name.value,
        permutation=permutation,
        chebyshev=schedule.chebyshev,
    )


def format_plan(plan: OrderingPlan) -> str:
    return " ".join(str(index) for index in plan.perm)


def parse_plan(text: str, name: OrderingName = OrderingName.EXPLICIT) -> OrderingPlan:
    try:
        perm = tuple(int(token) for token in text.split())
    except ValueError as err:
        raise UsageError(f"Ordering plans are whitespace-separated integers: {err}") from err
    return OrderingPlan(name, perm)
