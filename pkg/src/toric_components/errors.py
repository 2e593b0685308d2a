"""Exception hierarchy.

Every domain error carries a short ``code`` that the CLI prints verbatim.
"""


class ToricError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "ToricError"


class InternalError(ToricError):
    """An internal consistency check failed; indicates a bug, not bad input."""

    code = "InternalError"


class NotInSublattice(ToricError):
    code = "NotInSublattice"


class EmptySet(ToricError):
    code = "EmptySet"


class ArityMismatch(ToricError):
    code = "ArityMismatch"


class NotStronglyConvex(ToricError):
    code = "NotStronglyConvex"


class NotAFan(ToricError):
    code = "NotAFan"


class UnknownCone(ToricError):
    code = "UnknownCone"


class OutsideSupport(ToricError):
    code = "OutsideSupport"


class QuotientUndefined(ToricError):
    code = "QuotientUndefined"


class NotCartier(ToricError):
    code = "NotCartier"


class EmptySupport(ToricError):
    code = "EmptySupport"


class InvariantViolation(ToricError):
    code = "InvariantViolation"


class Degenerate(ToricError):
    """A system degenerates where it must not, or an oracle draw is not generic."""

    code = "Degenerate"


class EmptyIndexSet(ToricError):
    code = "EmptyIndexSet"


class TooManySystems(ToricError):
    code = "TooManySystems"


class ZeroResultant(ToricError):
    """The two oracle polynomials share a common factor; redraw coefficients."""

    code = "ZeroResultant"
