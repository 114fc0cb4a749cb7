"""Exception types shared across the package."""


class DomainError(ValueError):
    """A function was evaluated outside the set where it is defined or smooth."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class NonSmoothError(DomainError):
    """Finite differences disagree across step sizes: the function has a kink."""


class ConvexityError(ArithmeticError):
    """Fundamental tensor is singular or not positive definite."""

    def __init__(self, message, min_eig):
        super().__init__(message)
        self.min_eig = min_eig


class EstimationError(ArithmeticError):
    pass


class QuadratureError(ArithmeticError):
    pass
