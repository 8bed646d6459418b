"""
Errors raised by ces_solver.

Every error derives from ``CesSolverError`` and from the builtin exception a
caller would naturally expect, so ``except ValueError`` keeps working for
domain and parameter problems.
"""


class CesSolverError(Exception):
    pass


class DomainError(CesSolverError, ValueError):
    """A coordinate or coupling lies outside the physical domain."""


class ParameterError(CesSolverError, ValueError):
    """Spectral parameters that the solution method cannot accept."""


class GammaPoleError(CesSolverError, ArithmeticError):
    """Gamma evaluated at (or within tolerance of) a non-positive integer."""


class HypergeometricError(CesSolverError, ArithmeticError):
    pass


class ConvergenceError(HypergeometricError):
    pass


class DegenerateConnectionError(HypergeometricError):
    """c - a - b sits on an integer, where the connection formula needs its logarithmic limit."""


class IntegrationError(CesSolverError, ArithmeticError):
    pass


class FitError(CesSolverError, ArithmeticError):
    pass


class CoordinateMismatchError(CesSolverError, ValueError):
    pass
