"""Exception types shared across the package."""


class KcbsimError(Exception):
    """Base class for all package errors."""


class ZeroVector(KcbsimError):
    """A state was constructed from (numerically) all-zero amplitudes."""


class NonFinite(KcbsimError):
    """A NaN or infinite value was passed where a finite number is required."""


class NotUnitary(KcbsimError):
    """An operator failed the unitarity check."""


class NotProjector(KcbsimError):
    """An operator failed the projector check (P^2 = P, P = P^dagger)."""


class NotUnit(KcbsimError):
    """A direction vector is not unit length."""


class EmptySequence(KcbsimError):
    """An operator sequence to compose was empty."""


class ClosureFailure(KcbsimError):
    """The constructed basis cycle does not close back onto its first state."""


class ConventionMismatch(KcbsimError):
    """Two independent constructions of the same state disagree beyond phase."""


class PlanMismatch(KcbsimError):
    """A measurement unitary does not map onto its designated basis states."""


class InsufficientData(KcbsimError):
    """Too few kept shots to form an estimate."""


class ConfigError(KcbsimError):
    """A configuration value is missing, malformed, or out of range."""


class ValidationFailed(KcbsimError):
    """A named self-consistency check failed."""

    def __init__(self, check: str, message: str):
        self.check = check
        super().__init__(f"{check}: {message}")
