"""Exception hierarchy.

Domain errors (bad parameters) subclass ``ValueError`` so callers that only
care about "invalid input" can catch that.
"""


class TrailMiningError(Exception):
    """Base class for all package errors."""


class DomainError(TrailMiningError, ValueError):
    """Input outside the domain where the model is defined."""


class QOutOfRange(DomainError):
    pass


class GammaOutOfRange(DomainError):
    pass


class NonPositiveScale(DomainError):
    pass


class NonPositiveInput(DomainError):
    pass


class InvalidHikerProblem(DomainError):
    pass


class DegenerateConditioning(DomainError):
    pass


class EmptyPattern(DomainError):
    pass


class BackendMismatch(DomainError):
    pass


class InternalInconsistency(TrailMiningError):
    """An identity that must hold exactly did not (a bug, never bad input)."""


class SingularSystem(InternalInconsistency):
    pass


class StepCapExceeded(TrailMiningError, RuntimeError):
    pass


class EventCapExceeded(TrailMiningError, RuntimeError):
    pass
