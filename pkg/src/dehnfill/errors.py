"""Exception types shared across the package."""


class DehnfillError(Exception):
    """Base class for all package errors."""


class ZeroPolynomialError(DehnfillError):
    """An operation received the zero polynomial where it is not allowed."""


class ParseError(DehnfillError):
    """Malformed polynomial source text or fixture."""


class NonUnimodularMatrixError(DehnfillError):
    """A lattice substitution matrix must have determinant +1 or -1."""


class LeadingTieError(DehnfillError):
    """Two Newton-polygon corners maximize the filling exponent (collision slope)."""


class DegreeBoundExceededError(DehnfillError):
    """Input degree or recombination work exceeds the configured bound."""


class InternalCheckFailedError(DehnfillError):
    """An exact self-check failed; indicates a bug, never expected on valid input."""


class NonConvergenceError(DehnfillError):
    """Numeric iteration failed to converge within the iteration cap."""


class InsufficientDataError(DehnfillError):
    """Not enough survey records to estimate the requested quantity."""
