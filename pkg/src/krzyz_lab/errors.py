"""Exception types raised by krzyz_lab."""


class KrzyzLabError(Exception):
    """Base class for all errors raised by this package."""


class NearZeroConstantTerm(KrzyzLabError, ZeroDivisionError):
    """A series division or logarithm met a constant term below ``EPS_DIV``."""


class NonzeroInnerConstant(KrzyzLabError, ValueError):
    """Raw composition ``f(g)`` was requested with ``g(0) != 0``."""


class InvalidModulus(KrzyzLabError, ValueError):
    """Annulus inner radius outside the admissible range."""


class NotSelfMap(KrzyzLabError, ValueError):
    """A series failed the disk self-map certification."""


class ZeroOnContour(KrzyzLabError, ValueError):
    """The integrand of the argument principle nearly vanishes on the contour."""


class NormTooLarge(KrzyzLabError, ValueError):
    """Ahlfors-Weill hypothesis violated: B-norm estimate is at least 2."""


class IndexBeyondOrder(KrzyzLabError, IndexError):
    """A coefficient index exceeds the truncation order of a series."""
