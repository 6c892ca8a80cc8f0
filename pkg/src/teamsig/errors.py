"""Semantic exception hierarchy.

Every error the toolkit raises deliberately derives from ``TeamsigError``;
anything else escaping the public API is a bug.
"""


class TeamsigError(Exception):
    """Base class for all toolkit errors."""


class ConfigurationError(TeamsigError):
    """Instance or run configuration violates a structural requirement."""


class InvalidProfileError(TeamsigError):
    """Type profile does not fit the instance (length/values)."""


class InvalidUtilityError(TeamsigError):
    """Utility is not strictly increasing or has the wrong arity."""


class InvalidWeightsError(TeamsigError):
    """Objective weights are negative or do not sum to one."""


class InvalidPartitionError(TeamsigError):
    """Team partition is malformed for the instance."""


class UndefinedPosteriorError(TeamsigError):
    """Posterior requested for a zero-probability signal or conditioning."""


class EnumerationTooLargeError(TeamsigError):
    """Exact enumeration would exceed the configured cap."""


class InvalidEpsilonError(TeamsigError):
    """Typical-set tolerance leaves the admissible range."""


class InvalidRestrictionError(TeamsigError):
    """Dual restriction set is empty or inconsistent."""


class PreconditionError(TeamsigError):
    """Operation called on inputs that violate its stated precondition."""


class CertificateFailureError(TeamsigError):
    """A dual certificate row check failed; carries the offending report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class LpError(TeamsigError):
    """LP construction or solving failed (infeasible/unbounded/malformed)."""
