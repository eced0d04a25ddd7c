"""Exception types shared across the package."""


class InputDomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class DivisionDomainError(ZeroDivisionError):
    """A ratio was requested whose denominator vanishes."""


class NumericalFailureError(ArithmeticError):
    """Adaptive quadrature ran out of refinement budget.

    The best available estimate and its error bound are kept on the
    exception so callers can decide whether to use them anyway.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
