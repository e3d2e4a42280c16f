"""Numerical verification toolkit for radiation conditions of Helmholtz fields
above locally perturbed periodic surfaces."""
from .errors import ConvergenceError, DegeneracyError, DomainError, InsufficientData, ParameterError

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DegeneracyError",
    "DomainError",
    "InsufficientData",
    "ParameterError",
    "__version__",
]
