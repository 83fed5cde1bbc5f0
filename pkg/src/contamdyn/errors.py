"""Exception types shared across the package."""

from __future__ import annotations


class ContamdynError(Exception):
    """Base class for every package-specific error."""


class ValidationError(ContamdynError, ValueError):
    """A parameter set, scenario, or configuration violates an invariant."""


class ScenarioSyntaxError(ContamdynError, ValueError):
    """A scenario file could not be parsed.  Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SingularDenominator(ContamdynError, ArithmeticError):
    """The cleanup rate is within the singularity guard of the creation rate.

    In that regime the concept count stops growing and the growth-domain
    derivative is undefined; callers should integrate in the time domain
    (``integrate_in_time``) instead.
    """

    def __init__(self, message: str, *, k: float | None = None, c: float | None = None):
        super().__init__(message)
        self.k = k
        self.c = c


class DegenerateState(ContamdynError, RuntimeError):
    """The evolving state left the domain where the model is meaningful
    (the concept count collapsed)."""


class StepBudgetExceeded(ContamdynError, RuntimeError):
    """An integration would need more steps than the configured cap."""
