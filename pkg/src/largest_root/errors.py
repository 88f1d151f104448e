"""Exception types raised across the package."""

import numpy as np


class InvalidDimensionError(ValueError):
    pass


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class CalibrationDomainError(DomainError):
    """Dimensions fall outside the range where the log-transform calibration is defined."""


class RankDeficiencyError(np.linalg.LinAlgError):
    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class DefinitenessError(np.linalg.LinAlgError):
    """A matrix required to be positive definite is not (numerically)."""


class OrthogonalityError(ValueError):
    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class NoRootError(RuntimeError):
    def __init__(self, message, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
