"""Exception hierarchy and warning categories for the package."""

from __future__ import annotations


class HmmError(Exception):
    """Base class for all errors raised by this package."""


class InvalidVarianceError(HmmError):
    """A variance entry is zero or negative where a positive one is required."""


class DimensionMismatchError(HmmError):
    """Observation dimensionality does not match the model's."""


class ModelValidationError(HmmError):
    """A model failed validation; ``violations`` lists every broken invariant."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid model: " + "; ".join(self.violations))


class DataFormatError(HmmError):
    """A text input could not be parsed. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TooFewFramesError(HmmError):
    """Fewer observation frames than emitting states to seed."""


class DeadTrellisError(HmmError):
    """No surviving path through the trellis. ``iteration`` is set when the
    failure happened inside a training loop."""

    def __init__(self, message: str, iteration: int | None = None):
        self.iteration = iteration
        if iteration is not None:
            message = f"iteration {iteration}: {message}"
        super().__init__(message)


class CorruptTrellisError(HmmError):
    """Backtracking hit a missing backpointer; indicates a bug, not bad input."""


class PathSpaceTooLargeError(HmmError):
    """Exhaustive enumeration would exceed the safety guard."""


class EmptyStateWarning(UserWarning):
    """A state (or transition row) received no frames during re-estimation and
    kept its previous parameters."""
