"""Numerical toolkit for fractional calculus of variable order.

Implements the left/right Riemann-Liouville integrals and derivatives
and the left/right Caputo derivatives whose order is a function
alpha(t, tau), numerical checks for the boundedness and
integration-by-parts identities those operators satisfy, and a direct
(Ritz) solver for variational problems whose Lagrangian mixes classical
derivatives with variable-order fractional terms.
"""

from .exceptions import (
    ConfigError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    ParseError,
    PreconditionError,
    UnknownIdentifierError,
    VarfracError,
)
from .gammafn import GammaBounds, gamma, gamma_bounds
from .grids import GridFunction, OrderFunction
from .quadrature import (
    QuadratureSpec,
    SingularIntegrand,
    composite_simpson,
    differentiate_grid,
    integrate_singular,
    integrate_singular_batch,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "EvaluationError",
    "GammaBounds",
    "GridFunction",
    "OrderFunction",
    "ParseError",
    "PreconditionError",
    "QuadratureSpec",
    "SingularIntegrand",
    "UnknownIdentifierError",
    "VarfracError",
    "composite_simpson",
    "differentiate_grid",
    "gamma",
    "gamma_bounds",
    "integrate_singular",
    "integrate_singular_batch",
    "__version__",
]
