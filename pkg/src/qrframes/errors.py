"""Exception hierarchy shared by all modules."""


class QRFError(ValueError):
    """Base class for every domain error raised by qrframes."""


class GroupMismatchError(QRFError):
    """Two group elements from different groups were combined or compared."""


class DomainError(QRFError):
    """A point, model or value lies outside the declared domain."""


class AmbiguityError(QRFError):
    """More than one group element qualifies (nontrivial stabiliser).

    ``candidates`` holds every qualifying element so callers can pick one
    themselves.
    """

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class SameOrbitError(QRFError):
    """Two branches of a superposition lie on one orbit."""

    def __init__(self, message, branches=()):
        super().__init__(message)
        self.branches = tuple(branches)


class PreconditionError(QRFError):
    pass


class DegenerateFrameError(QRFError):
    """Reference fields repeat a value, so identification is not unique."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ValidationError(QRFError):
    """Scenario or configuration failed schema validation."""
