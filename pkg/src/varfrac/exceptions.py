"""Exception types shared across the package."""


class VarfracError(Exception):
    """Base class for all package errors."""


class DomainError(VarfracError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(VarfracError, ValueError):
    """A documented hypothesis on the inputs is violated."""


class ConvergenceError(VarfracError, RuntimeError):
    """An iterative numerical procedure failed to reach its tolerance.

    Carries the last two internal error estimates so callers can tell
    whether the run was close to converging or diverging.
    """

    def __init__(self, message, estimates=None):
        super().__init__(message)
        self.estimates = tuple(estimates) if estimates is not None else ()


class ParseError(VarfracError, ValueError):
    """Syntax error in expression source, with a 1-based column."""

    def __init__(self, message, column, expected=()):
        super().__init__(message)
        self.column = column
        self.expected = tuple(expected)

    def to_json_dict(self):
        return {"line": 1, "column": self.column, "message": str(self)}


class UnknownIdentifierError(ParseError):
    """An identifier outside the fixed variable/function set."""

    def __init__(self, name, column):
        super().__init__(f"unknown identifier '{name}'", column)
        self.name = name


class EvaluationError(VarfracError, ArithmeticError):
    """Numeric domain violation while evaluating an expression node."""

    def __init__(self, message, node_text=None):
        super().__init__(message)
        self.node_text = node_text


class ConfigError(VarfracError, ValueError):
    """A run configuration document is malformed or inconsistent."""
