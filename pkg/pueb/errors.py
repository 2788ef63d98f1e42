"""Exception types raised when an input is rejected."""

from __future__ import annotations


class PuebError(ValueError):
    """Base class for rejected inputs."""


class UnsupportedDimensionError(PuebError):
    """Dimension is not an odd prime (power) or lies outside the configured table."""


class FieldMismatchError(PuebError):
    """Operands belong to different finite fields."""


class MissingSettingsError(PuebError):
    """A probability table lacks measurement settings required by a reconstruction."""

    def __init__(self, missing: list[str]) -> None:
        self.missing = list(missing)
        super().__init__(f"missing measurement settings: {', '.join(self.missing)}")


class InvalidProbabilitiesError(PuebError):
    """Probabilities are negative beyond round-off or do not sum to one."""
