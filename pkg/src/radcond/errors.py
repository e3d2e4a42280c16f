"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain of a function (branch point, coincident points...)."""


class ParameterError(ValueError):
    """Inconsistent or out-of-range configuration."""


class InsufficientData(ValueError):
    """Too few usable samples for a fit."""


class DegeneracyError(ValueError):
    """Mapping stopped being a diffeomorphism at some point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ConvergenceError(RuntimeError):
    """Quadrature did not reach its tolerance within budget.

    Carries the best available estimate and an error bound so that callers
    running sweeps can keep going.
    """

    def __init__(self, message, best=None, bound=None):
        super().__init__(message)
        self.best = best
        self.bound = bound
