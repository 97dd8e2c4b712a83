"""Exception hierarchy.

Validation problems with input documents derive from :class:`ValidationError`
(CLI exit code 2); failures during a computation derive from
:class:`ComputationError` (CLI exit code 3).
"""


class MGCError(Exception):
    """Base class for all errors raised by the package."""


class ValidationError(MGCError, ValueError):
    pass


class ComputationError(MGCError):
    pass


# graph / document validation

class MalformedDocument(ValidationError):
    pass


class DisconnectedGraph(ValidationError):
    pass


class LoopEdge(ValidationError):
    pass


class ParallelEdge(ValidationError):
    pass


class NonpositiveLength(ValidationError):
    pass


class DuplicateId(ValidationError):
    pass


class UnknownVertex(ValidationError):
    pass


class UnknownEdge(ValidationError):
    pass


class InvalidSubset(ValidationError):
    pass


class InvalidFunction(ValidationError):
    pass


# computations

class EmptySet(ComputationError):
    pass


class EmptyOmega(ComputationError):
    pass


class ZeroPerimeterOmega(ComputationError):
    pass


class PatternBudgetExceeded(ComputationError):
    pass


class NotKirchhoff(ComputationError):
    pass


class ViolatedConstraint(ComputationError):
    pass


class InfeasibleDual(ComputationError):
    pass


class NotNormalized(ComputationError):
    pass


class NotACheegerCut(ComputationError):
    pass


class NotEigenpair(ComputationError):
    """The pair is not an eigenpair; ``reason`` names the failed condition."""

    def __init__(self, reason, detail=""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class NoRootInRange(ComputationError):
    pass


class ScanTooCoarse(ComputationError):
    pass


class MeshTooCoarse(ComputationError):
    pass
