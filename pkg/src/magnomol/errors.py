"""Exception types raised by magnomol."""

import numpy as np


class MagnomolError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(MagnomolError, ValueError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ConvergenceError(MagnomolError):
    def __init__(self, message, residual, iterations):
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"{message} (residual={residual:.3e} after {iterations} iterations)")


class StabilityError(MagnomolError):
    """The drift matrix is not Hurwitz, or an integration diverged."""


class NumericalError(MagnomolError):
    def __init__(self, message, matrix=None):
        self.matrix = None if matrix is None else np.array(matrix, copy=True)
        if matrix is not None:
            message = f"{message}\n{np.array2string(np.asarray(matrix), precision=6)}"
        super().__init__(message)


class SweepError(MagnomolError):
    """Every point in a sweep failed."""


class ConfigError(MagnomolError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
