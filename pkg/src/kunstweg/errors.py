"""Exception types shared across the package."""

from __future__ import annotations


class KunstwegError(Exception):
    """Base class for all package-specific failures."""


class DimensionMismatchError(KunstwegError, ValueError):
    """Vector length does not match the operator size."""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected a vector of length {expected}, got {actual}")


class NumericOverflowError(KunstwegError, ArithmeticError):
    """A non-finite scalar appeared during floating or decimal iteration."""


class PrecisionCeilingError(KunstwegError, ValueError):
    """Requested decimal digits fall outside the configured bounds."""


class ConvergenceError(KunstwegError, RuntimeError):
    """Iteration failed to reach the requested tolerance."""


class ZeroVectorError(KunstwegError, ArithmeticError):
    """Operator application produced a non-positive normalizer (defensive)."""


class ChainValidationError(KunstwegError, RuntimeError):
    """A constructed polygon chain violates its own geometric invariants."""

    def __init__(self, message: str, worst_index: int | None = None,
                 deviation: float | None = None):
        self.worst_index = worst_index
        self.deviation = deviation
        super().__init__(message)
