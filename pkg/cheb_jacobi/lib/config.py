"""Experiment configuration: a dataclass validated through its voluptuous schema.

Config files are plain text, one ``key = value`` per line with ``#`` comments;
``--set key=value`` overrides on the command line use the same syntax.
"""
from dataclasses import dataclass, field
import logging
from typing import Dict, Iterable, List, Optional

from voluptuous import All, Coerce, In, Range
from voluptuous.error import MultipleInvalid

from .const import (
    METHOD_SOR,
    METHODS,
    ORDERING_DEFAULT,
    PROBLEM_POISSON3D_SPHERE,
    PROBLEMS,
    SCHEDULE_BOUNDS_FULL_DOMAIN,
    SCHEDULE_BOUNDS_PROBLEM,
    STENCIL_FIVE_POINT,
    STENCIL_SEVEN_POINT,
    STENCILS,
)
from .exceptions import ConfigurationError
from .ordering import OrderingName
from .schema_helpers import comma_list, get_schema_for_dataclass
from .stencil import StencilFamily, StencilSpec

_LOGGER: logging.Logger = logging.getLogger(__package__)

ORDERINGS = [ORDERING_DEFAULT] + [
    name.value for name in OrderingName if name != OrderingName.EXPLICIT
]


def _positive(kind):
    return All(Coerce(kind), Range(min=0, min_included=False))


@dataclass
class MethodRun:
    """One entry of the method matrix."""

    method: str
    omega: Optional[float] = None

    @property
    def label(self) -> str:
        if self.omega is None:
            return self.method
        return f"{self.method}({self.omega:g})"


@dataclass
class ExperimentConfig:
    problem: str = field(
        default=PROBLEMS[0], metadata={"schema_type": In(PROBLEMS)}
    )
    n: int = field(default=64, metadata={"schema_type": All(Coerce(int), Range(min=4))})
    extent: float = field(default=1.0, metadata={"schema_type": _positive(float)})
    stencil: str = field(default="", metadata={"schema_type": In([""] + STENCILS)})
    a: int = field(default=1, metadata={"schema_type": All(Coerce(int), Range(min=0))})
    b: int = field(default=1, metadata={"schema_type": All(Coerce(int), Range(min=1))})
    width: int = field(default=1, metadata={"schema_type": All(Coerce(int), In([1, 2]))})
    methods: List[str] = field(
        default_factory=lambda: ["cjm"],
        metadata={"schema_type": comma_list(In(METHODS))},
    )
    sigma: float = field(
        default=1e-10,
        metadata={
            "schema_type": All(Coerce(float), Range(min=0, max=1, min_included=False, max_included=False))
        },
    )
    cycle_size: int = field(default=0, metadata={"schema_type": All(Coerce(int), Range(min=0))})
    round_to_power_of_two: bool = False
    ordering: str = field(default=ORDERING_DEFAULT, metadata={"schema_type": In(ORDERINGS)})
    tolerance: float = field(default=1e-10, metadata={"schema_type": All(Coerce(float), Range(min=0))})
    max_iterations: int = field(default=200000, metadata={"schema_type": _positive(int)})
    max_cycles: int = field(default=1000, metadata={"schema_type": _positive(int)})
    stride: int = field(default=1, metadata={"schema_type": _positive(int)})
    sor_omegas: List[float] = field(
        default_factory=list,
        metadata={
            "schema_type": comma_list(
                All(Coerce(float), Range(min=0, max=2, min_included=False, max_included=False))
            )
        },
    )
    octant: bool = False
    schedule_bounds: str = field(
        default=SCHEDULE_BOUNDS_PROBLEM,
        metadata={"schema_type": In([SCHEDULE_BOUNDS_PROBLEM, SCHEDULE_BOUNDS_FULL_DOMAIN])},
    )
    charge: float = field(default=1.0, metadata={"schema_type": Coerce(float)})
    radius: float = field(default=0.0, metadata={"schema_type": All(Coerce(float), Range(min=0))})
    seed: int = 1234
    output_dir: str = "results"
    timeout: float = field(default=0.0, metadata={"schema_type": All(Coerce(float), Range(min=0))})
    concurrency: int = field(default=1, metadata={"schema_type": _positive(int)})

    @classmethod
    def from_user_input(cls, user_input):
        try:
            valid_user_input = get_schema_for_dataclass(cls)(dict(user_input))
        except MultipleInvalid as exc:
            errors = {
                ".".join(str(part) for part in err.path) or "base": err.msg
                for err in exc.errors
            }
            raise ConfigurationError(
                "Invalid configuration: "
                + ", ".join(f"{key}: {message}" for key, message in sorted(errors.items()))
            ) from exc

        config = cls(**valid_user_input)
        config.validate()
        return config

    @classmethod
    def get_schema(cls):
        return get_schema_for_dataclass(cls)

    @classmethod
    def load(cls, path: Optional[str] = None, overrides: Iterable[str] = ()):
        """Read ``path`` (if any), apply ``key=value`` overrides and validate."""
        user_input: Dict[str, str] = {}
        if path is not None:
            user_input.update(read_config_file(path))
        user_input.update(parse_assignments(overrides, source="--set"))
        return cls.from_user_input(user_input)

    @property
    def dims(self) -> int:
        return 3 if self.problem == PROBLEM_POISSON3D_SPHERE else 2

    @property
    def stencil_name(self) -> str:
        if self.stencil:
            return self.stencil
        return STENCIL_SEVEN_POINT if self.dims == 3 else STENCIL_FIVE_POINT

    def stencil_spec(self) -> StencilSpec:
        family = StencilFamily(self.stencil_name)
        if family == StencilFamily.GENERAL_COMBO:
            return StencilSpec.general_combo(self.a, self.b, self.width)
        return StencilSpec(family)

    def method_runs(self) -> List[MethodRun]:
        runs: List[MethodRun] = []
        for method in self.methods:
            if method == METHOD_SOR and self.sor_omegas:
                runs.extend(MethodRun(method, omega) for omega in self.sor_omegas)
            else:
                runs.append(MethodRun(method))
        return runs

    def validate(self):
        """Cross-field checks the per-key schema cannot express."""
        if not self.methods:
            raise ConfigurationError("At least one method must be configured")
        spec = self.stencil_spec()
        if spec.dims != self.dims:
            raise ConfigurationError(
                f"Problem {self.problem} is {self.dims}D but stencil {self.stencil_name} is {spec.dims}D"
            )
        if self.octant and self.problem != PROBLEM_POISSON3D_SPHERE:
            raise ConfigurationError("The octant variant only exists for poisson3d-sphere")
        if self.schedule_bounds == SCHEDULE_BOUNDS_FULL_DOMAIN and not self.octant:
            _LOGGER.warning(
                "schedule_bounds=%s has no effect without octant=true", self.schedule_bounds
            )
        if self.concurrency > 1:
            _LOGGER.warning(
                "Running %d methods concurrently; parallel kernels share the thread pool",
                self.concurrency,
            )


def parse_assignments(lines: Iterable[str], source: str = "config") -> Dict[str, str]:
    """Split ``key = value`` lines, skipping blanks and ``#`` comments."""
    result: Dict[str, str] = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, separator, value = line.partition("=")
        key = key.strip()
        if not separator or not key:
            raise ConfigurationError(
                f"{source} line {number}: expected 'key = value', got {raw.strip()!r}"
            )
        if key in result:
            _LOGGER.warning("%s line %d: %s is set twice; keeping the last value", source, number, key)
        result[key] = value.strip()
    return result


def read_config_file(path: str) -> Dict[str, str]:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_assignments(handle, source=path)
    except OSError as err:
        raise ConfigurationError(f"Cannot read config file {path}: {err}") from err
