"""Exception hierarchy shared by every module of the lab."""


class LabError(Exception):
    """Base class for all lab errors."""


class DomainError(LabError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class PoleAtOne(DomainError):
    """Evaluation requested at (or a contour passes through) the pole s = 1."""


class PreconditionViolated(DomainError):
    """A documented precondition of a lemma check does not hold."""


class BudgetExceeded(LabError):
    """The error estimate cannot reach the requested target within the term budget."""


class ZeroOnPath(LabError):
    """|zeta| fell below the zero threshold on a continuation path."""

    def __init__(self, message, point=None, modulus=None):
        super().__init__(message)
        self.point = point
        self.modulus = modulus


class QuadratureStalled(LabError):
    """Adaptive quadrature did not meet its target at the maximum depth.

    The best available estimate and its error are attached.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class BoundaryZero(LabError):
    """A zero of f - target sits on the census circle even after nudging."""


class UnstableWinding(LabError):
    """The accumulated argument change did not snap to an integer."""


class DepthExceeded(LabError):
    """Recursive subdivision ran out of depth before isolating every zero."""

    def __init__(self, message, disk=None):
        super().__init__(message)
        self.disk = disk
