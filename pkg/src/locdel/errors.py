"""Exception types shared across the package.

Each class corresponds to one failure mode named in the operation
contracts; keeping them in one module lets callers catch them without
importing the heavier machinery.
"""


class LocdelError(Exception):
    """Base class for all package-specific errors."""


class UnknownName(LocdelError):
    """A catalogue or registry lookup used a name that does not exist."""


class BadParams(LocdelError):
    """Algorithm or operation parameters are out of their valid range."""


class MalformedHeader(LocdelError):
    """A parsed graph text did not start with a valid header."""


class VertexOutOfRange(LocdelError):
    """An edge in a parsed graph referenced a vertex id >= n or < 0."""


class OddLcfApplication(LocdelError):
    """An LCF code was applied to an odd cycle length."""


class OddPointCount(LocdelError):
    """A pairing was requested over an odd number of points."""


class AlreadyExposed(LocdelError):
    """expose_mate was called on a point whose pair is already exposed."""


class NoPointsLeft(LocdelError):
    """No unexposed candidate mate remains for the requested point."""


class TriesExhausted(LocdelError):
    """Rejection sampling hit its try budget.

    Carries ``tries`` and ``accepted`` counts for diagnostics.
    """

    def __init__(self, message, tries=None, accepted=0):
        super().__init__(message)
        self.tries = tries
        self.accepted = accepted


class Stuck(LocdelError):
    """A deprioritised selection drew a type with no alive vertices."""


class DegenerateMix(LocdelError):
    """Deprioritised mixing weights are undefined (alpha + beta <= eps)."""


class OutsideDomain(LocdelError):
    """A transition-field evaluation was requested outside D(eps).

    ``step`` is set when the failure happened inside the Euler
    recurrence, identifying the offending step index.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class TruncationLoss(LocdelError):
    """Query-graph enumeration lost more probability mass than allowed."""


class LeftDomain(LocdelError):
    """ODE integration left the domain; ``x`` reports the position."""

    def __init__(self, message, x=None, y=None):
        super().__init__(message)
        self.x = x
        self.y = y


class NoEventInRange(LocdelError):
    """Event-driven integration reached x_end without a sign change."""
