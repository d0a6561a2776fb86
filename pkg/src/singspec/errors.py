"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the supported domain (order, ray, parameter range)."""


class NearEigenvalueError(ArithmeticError):
    """Evaluation point too close to an eigenvalue for a stable result."""

    def __init__(self, message, nearest=None):
        super().__init__(message)
        self.nearest = nearest


class ConvergenceError(ArithmeticError):
    """An iterative procedure failed to reach its target tolerance."""

    def __init__(self, message, estimate=None, bracket=None):
        super().__init__(message)
        self.estimate = estimate
        self.bracket = bracket
