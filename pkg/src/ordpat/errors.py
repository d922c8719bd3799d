"""Exception types shared across the package."""


class InsufficientDataError(ValueError):
    """Raised when a series is too short for the requested operation."""


class RegimeError(ValueError):
    """Raised when an operation is called in the wrong distributional regime.

    The normal (delta-method) machinery requires a non-uniform pattern
    distribution; the quadratic-form machinery requires the uniform one.
    The message says which API to use instead.
    """


class SingularModelError(ValueError):
    """Raised when a model quantity is degenerate (zero variance, flat line)."""
