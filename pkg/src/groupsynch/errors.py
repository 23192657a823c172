"""Exception types shared across the package."""


class GroupsynchError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(GroupsynchError, ValueError):
    """A caller-supplied parameter is out of range or inconsistent."""


class NumericalInconsistencyError(GroupsynchError, ArithmeticError):
    """A numerical self-check failed beyond tolerance (bad inputs, broken invariant)."""


class ResourceLimitError(GroupsynchError, RuntimeError):
    """An enumeration would exceed the configured budget; raised before allocation."""


class NumericalOverflowError(GroupsynchError, ArithmeticError):
    """A floating-point computation produced a non-finite value."""


class DivergentSeriesError(GroupsynchError, ValueError):
    """A series limit was requested outside its convergence region."""


class NonConvergenceError(GroupsynchError, RuntimeError):
    """An iterative solver did not converge within its iteration limit."""


class ConfigError(GroupsynchError, ValueError):
    """An experiment configuration failed validation.

    ``field`` holds the dotted path of the offending entry.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
