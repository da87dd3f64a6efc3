"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class RCMError(Exception):
    """Base class for domain errors raised by rcmphase."""


class MalformedInput(RCMError, ValueError):
    pass


class AssumptionViolation(RCMError, ValueError):
    """The template graph breaks one of the structural requirements on (G, endpoints)."""


class BadGraph6(RCMError, ValueError):
    pass


class BudgetExceeded(RCMError):
    """Exhaustive enumeration over a grid larger than the configured cell budget."""


class DimensionMismatch(RCMError, ValueError):
    pass


class NotOnBoundary(RCMError, ValueError):
    pass


class NotMBalanced(RCMError):
    """The template fails the m-balance density condition, so the closed-form rates do not apply."""


class NotNormalRegime(RCMError):
    pass


class SourceEmpty(RCMError):
    pass
