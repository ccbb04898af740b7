"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class TritopError(Exception):
    exit_code = 1


class ValidationError(TritopError, ValueError):
    exit_code = 2


class InsufficientDataError(ValidationError):
    """Too few usable samples for a fit or a finite-data proxy."""


class SingularMatrixError(TritopError, ZeroDivisionError):
    exit_code = 3


class ConvergenceError(TritopError, ArithmeticError):
    exit_code = 4

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual
