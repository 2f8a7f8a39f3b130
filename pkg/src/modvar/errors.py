"""Exception types shared across the package."""


class ModvarError(Exception):
    """Base class for all package errors."""


class ConfigError(ModvarError, ValueError):
    """Invalid aperture or run parameters."""


class QuadratureError(ModvarError, ArithmeticError):
    """Adaptive integration failed to meet the requested tolerance.

    ``best`` carries the last estimate so callers can still inspect it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class GridError(ModvarError, ValueError):
    """Grid parameters are under-resolved or incommensurate with the lattice."""


class FitError(ModvarError, ValueError):
    """Degenerate input to a least-squares fit."""
