"""Exception hierarchy.

Every error raised for a domain reason derives from :class:`DomainError`; the
CLI maps those to exit code 1.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all domain failures."""


class LayoutError(DomainError):
    pass


class DegeneratePreparationError(DomainError):
    pass


class UnitarityError(DomainError):
    pass


class NormalizationError(DomainError):
    pass


class ImpossibleOutcomeError(DomainError):
    pass


class PartitionError(DomainError):
    pass


class SizeError(DomainError):
    pass


class ParseError(DomainError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityError(DomainError):
    pass


class DegenerateProblemError(DomainError):
    pass


class UnsupportedDepthError(DomainError):
    pass


class CancellationError(DomainError):
    pass


class LabelIncoherenceError(DomainError):
    pass


class SeparationError(DomainError):
    """Conditional X states cannot be told apart by a basis change on X."""


class RankError(DomainError):
    pass


class NonTerminationError(DomainError):
    pass


class ModelMismatchError(DomainError):
    pass
