"""Exception types shared across the library."""


class BoltzqError(Exception):
    """Base class for all library-specific errors."""


class DomainError(BoltzqError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedDimensionError(DomainError):
    """An analytic operation was asked to handle a game that is not 2x2."""


class DegenerateGameError(DomainError):
    """Reduced coefficients are degenerate (a or c vanishes).

    ``continuum`` is set when the degeneracy makes a player indifferent
    between actions for every opponent strategy, so equilibria form a
    continuum instead of a finite set.
    """

    def __init__(self, message, continuum=False):
        super().__init__(message)
        self.continuum = continuum


class NotApplicableError(BoltzqError, ValueError):
    """The operation's applicability conditions are not met by this game."""


class GameFormatError(BoltzqError, ValueError):
    """A game description (JSON file or dict) is malformed."""


class NumericFailureError(BoltzqError, RuntimeError):
    """A numerical procedure failed to converge; carries diagnostics."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals
