"""Exception hierarchy shared by every engine module."""


class DesplaError(Exception):
    """Base class for engine errors."""


class BudgetExceeded(DesplaError):
    """A combinatorial search passed its configured cap."""

    def __init__(self, what, limit, seen=None):
        self.what = what
        self.limit = limit
        self.seen = seen
        msg = f"{what} budget exceeded (limit {limit}"
        msg += f", reached {seen})" if seen is not None else ")"
        super().__init__(msg)


class NoColimit(DesplaError):
    """A required colimit does not exist in the finite category."""


class NotStabilized(DesplaError):
    """An iteration ran out of stages before its chains stabilized."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class MalformedCrossing(DesplaError):
    """Interleaving data violates the crossing equations."""


class CertificateMismatch(DesplaError):
    """A stored proof object failed re-verification."""


class DisplacementMissing(DesplaError):
    """A displacement required by an algorithm does not exist."""

    def __init__(self, message, component=None, stage=None, trace=None):
        super().__init__(message)
        self.component = component
        self.stage = stage
        self.trace = trace


class MalformedJoin(DesplaError):
    """A category does not have the shape of a join 1 < C."""


class InvalidPartition(DesplaError):
    """A bridge decomposition has a morphism from the plus part to the minus part."""


class InvalidCategory(DesplaError):
    """Input data does not describe a valid category or functor."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)
