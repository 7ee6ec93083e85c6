"""Exception types shared across the package."""


class SqueezeDynError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(SqueezeDynError, ValueError):
    """A configuration or argument violates a documented precondition."""


class NonPositiveN(ValidationError):
    """Particle number below 1."""


class NonFiniteParameter(ValidationError):
    """A NaN or infinite value where a finite real is required."""


class NegativeTime(ValidationError):
    """Evaluation time below zero."""


class NTooSmall(ValidationError):
    """Closed forms need at least two particles."""


class NTooLarge(ValidationError):
    """Requested ensemble exceeds the explicit-state memory cap."""


class InvalidKappa(ValidationError):
    """Decoherence parameter outside [-1, 1]; channel weights would go negative."""


class StepTooLarge(ValidationError):
    """Grid step fails the memory-kernel solver stability guard."""


class KernelEvaluationError(SqueezeDynError):
    """A user-supplied memory kernel raised or returned a non-finite value."""


class NotOscillatory(SqueezeDynError):
    """Zero search requested for a decoherence function without zeros."""


class StepInstability(SqueezeDynError):
    """Generator integration drifted off unit trace."""


class DegenerateDenominator(SqueezeDynError):
    """Squeezing-parameter denominator at or below zero."""


class VerificationFailure(SqueezeDynError):
    """The closed-form versus exact-state comparison exceeded tolerance."""
