"""Errors raised by cheb-jacobi."""
from typing import Optional


class CjmError(Exception):
    """Base class for all cheb-jacobi errors."""


class ConfigurationError(CjmError):
    """Invalid grid, stencil, halo or experiment configuration."""


class UsageError(CjmError):
    """An operation was called with incompatible arguments."""


class DegenerateIntervalError(CjmError):
    """The spectral interval admits no finite schedule or rescaling."""


class DivergenceError(CjmError):
    def __init__(self, message: str, iteration: int, omega: Optional[float] = None):
        super().__init__(message)
        self.iteration = iteration
        self.omega = omega

    def __str__(self) -> str:
        suffix = f" (iteration {self.iteration}"
        if self.omega is not None:
            suffix += f", omega {self.omega:.6g}"
        return f"{super().__str__()}{suffix})"


class SolveTimeoutError(CjmError):
    """A solve ran past its deadline and was stopped."""

    def __init__(self, message: str, iteration: int):
        super().__init__(message)
        self.iteration = iteration
