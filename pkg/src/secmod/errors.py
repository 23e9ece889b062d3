"""Exception types shared across the package."""


class SecmodError(Exception):
    """Base class for all package errors."""


class PacDomainError(SecmodError, ValueError):
    """Power allocation coefficient outside the open interval (0, 0.5)."""


class FrameMismatchError(SecmodError, ValueError):
    """Outer and inner symbol frames have different lengths."""


class NoSecrecyMarginError(SecmodError, ValueError):
    """The legitimate channel is not better than the eavesdropper's."""


class PacStatusError(SecmodError):
    """A power allocation query did not produce an active-constraint solution.

    Carries the offending solution so callers can report it.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class MonotonicityError(SecmodError):
    """Eavesdropper SEP is not nonincreasing in the PAC, so bisection is unsafe."""
