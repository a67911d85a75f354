"""
Exception hierarchy for rational_wsos

Every failure the library can signal is a subclass of WsosError, so callers
(and the CLI) can catch the whole family with one clause.
"""

__all__ = [
    "WsosError",
    "NotFactorable",
    "NotPD",
    "NotInterior",
    "NotUnisolvent",
    "DegreeOverflow",
    "DimensionMismatch",
    "NoRealRoot",
    "EmptyInterval",
    "InitNotValid",
    "MaxIters",
    "RoundingFailed",
    "DigestMismatch",
    "ParseError",
]


class WsosError(RuntimeError):
    """Base class for all rational_wsos errors."""


class NotFactorable(WsosError):
    """LDL^T elimination hit a zero pivot with a nonzero residual."""


class NotPD(WsosError):
    """A matrix required to be positive definite is not."""


class NotInterior(WsosError):
    """A dual vector is outside the interior of the dual cone."""


class NotUnisolvent(WsosError):
    """Interpolation nodes or sample points do not determine the polynomial space."""


class DegreeOverflow(WsosError):
    """A polynomial does not fit in the requested basis degree."""


class DimensionMismatch(WsosError):
    """Vector or matrix sizes do not agree."""


class NoRealRoot(WsosError):
    """The bound-update quadratic has a negative discriminant."""


class EmptyInterval(WsosError):
    """A rounding target interval is empty at the current enclosure precision."""


class InitNotValid(WsosError):
    """The initial certificate does not satisfy the solver precondition."""


class MaxIters(WsosError):
    """The iteration limit was reached before the stopping rule fired.

    The partial result (whatever the solver had certified so far) is kept
    on ``result`` so callers can still use it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class RoundingFailed(WsosError):
    """A rounded certificate left the dual interior."""


class DigestMismatch(WsosError):
    """A certificate was produced for a different cone."""


class ParseError(WsosError):
    """An input file or value could not be parsed."""
