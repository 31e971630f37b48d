"""Exception types shared by the solver modules."""


class SolverError(Exception):
    """Base class for numerical failures (CLI exit code 3)."""


class NonFinite(SolverError):
    """The integrated state overflowed or became NaN."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class NoConvergence(SolverError):
    def __init__(self, message, last_value, residual):
        super().__init__(message)
        self.last_value = last_value
        self.residual = residual


class DerivativeVanished(SolverError):
    def __init__(self, message, value, derivative):
        super().__init__(message)
        self.value = value
        self.derivative = derivative


class InitialSolveFailed(SolverError):
    pass


class BadBracket(SolverError):
    pass


class DomainError(ValueError):
    """Argument outside the domain where a closed form is defined."""


class ValidationError(ValueError):
    """The problem data violates the structural conditions on g."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConfigError(ValueError):
    pass
