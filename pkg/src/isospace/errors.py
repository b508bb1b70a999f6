"""Exception hierarchy shared by every module."""

from __future__ import annotations


class IsospaceError(Exception):
    """Base class for all library errors."""


class UnknownParam(IsospaceError):
    pass


class ContradictoryConstraints(IsospaceError):
    pass


class OutOfRangeParam(IsospaceError):
    pass


class DegenerateMarginal(IsospaceError):
    """Correlation is 0/0 because one marginal is a point mass."""


class SingularFisher(IsospaceError):
    pass


class CountOnPrunedEvent(IsospaceError):
    """Observed counts land on an event the constrained space forbids."""


class NonSequentialFreeNodes(IsospaceError):
    """A free parameter spans several histories, so backwards induction does not apply."""


class UnsupportedShape(IsospaceError):
    pass


class EmptyFeasibleSet(IsospaceError):
    pass


class UnknownGame(IsospaceError):
    pass


class UnknownFamily(IsospaceError):
    pass


class BadParams(IsospaceError):
    pass
