"""Exception hierarchy shared by the solver and verifier modules."""


class RadnodalError(Exception):
    """Base class for every error raised by this package."""


class ModelError(RadnodalError, ValueError):
    """A problem specification violates one of its invariants."""


class DimensionError(ModelError):
    pass


class ExponentError(ModelError):
    pass


class DomainError(RadnodalError, ValueError):
    """An operation was called on the wrong kind of domain."""


class RangeError(RadnodalError, ValueError):
    """A radius or interval lies outside the admissible range."""


class PreconditionError(RadnodalError, ValueError):
    pass


class DegenerateNonlinearityError(RadnodalError, ValueError):
    pass


class StatusError(RadnodalError):
    """A profile did not complete and cannot be used for this operation."""


class InsufficientDataError(RadnodalError, ValueError):
    pass


class IntegrationError(RadnodalError):
    """The integrator could not advance (step size underflow or step budget)."""

    def __init__(self, message, at_r=None):
        super().__init__(message)
        self.at_r = at_r


class BracketNotFoundError(RadnodalError):
    pass


class ConditioningError(RadnodalError):
    """Bisection reached floating-point resolution without meeting the boundary tolerance."""


class DataError(RadnodalError, ValueError):
    pass
