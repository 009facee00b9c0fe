"""
Error hierarchy for the outlier detection toolkit.

Every error carries the process exit code the command line reports for it.
"""

from typing import Optional


class OutlierDetectionError(Exception):
    """Base exception for outlier detection errors."""

    exit_code = 1


class DomainError(OutlierDetectionError, ValueError):
    """An argument lies outside its mathematical domain."""

    exit_code = 2


class ConfigurationError(OutlierDetectionError):
    """A configuration object violates one of its invariants."""

    exit_code = 2


class UsageError(OutlierDetectionError):
    """The command line could not be parsed."""

    exit_code = 2


class NotPositiveDefiniteError(OutlierDetectionError):
    """Cholesky factorization failed: the matrix is singular or indefinite."""

    exit_code = 4


class DegenerateSampleError(OutlierDetectionError):
    """Too few observations to form a covariance."""

    exit_code = 4


class EstimationFailedError(OutlierDetectionError):
    """No start, subsample or scan produced a usable estimate."""

    exit_code = 4


class DataFormatError(OutlierDetectionError):
    """A dataset or prediction file is malformed."""

    exit_code = 5

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


IO_EXIT_CODE = 3
