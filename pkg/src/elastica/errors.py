"""Exception hierarchy.

Errors split into two families so the CLI can map them to exit codes:
``InputError`` (malformed files, bad arguments) and ``DomainError``
(well-formed input that violates a geometric or numerical precondition).
"""


class ElasticaError(Exception):
    """Base class for all library errors."""


class InputError(ElasticaError, ValueError):
    pass


class ShapeFormatError(InputError):
    pass


class DomainError(ElasticaError):
    pass


class ConvexityViolation(DomainError):
    pass


class DegenerateShape(DomainError):
    pass


class PointOutside(DomainError):
    pass


class ContainmentUnverified(DomainError):
    pass


class QuadratureUnderflow(DomainError):
    pass


class NonpositiveRadius(DomainError):
    pass


class DegenerateFrame(DomainError):
    pass


class FrameMissing(DomainError):
    pass


class TangentNotFound(DomainError):
    pass


class OutOfRange(DomainError):
    pass


class HypothesisUnmet(DomainError):
    pass


class EpsilonTooLarge(DomainError):
    pass


class FitUnstable(DomainError):
    pass


class ProjectionFailed(DomainError):
    pass


class LineSearchFailed(DomainError):
    pass
