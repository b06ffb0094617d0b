"""Exception types shared across the package."""


class NumericalFailure(RuntimeError):
    """A computed state or decomposition left its numerical tolerance band.

    ``tau`` carries the dimensionless time at which the violation was seen,
    when there is one.
    """

    def __init__(self, message, tau=None):
        super().__init__(message)
        self.tau = tau


class InvalidState(ValueError):
    """A density matrix that cannot be processed (e.g. zero-weight collapse)."""


class NotCompletelyPositive(ValueError):
    """A Choi matrix with an eigenvalue below the complete-positivity tolerance."""
