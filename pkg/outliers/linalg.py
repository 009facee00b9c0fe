"""
Dense numerical primitives shared by every detector.

Means, divide-by-count covariances, Cholesky log-determinants, Mahalanobis
distances and the chi-squared quantile. Inverses are never materialized:
every distance goes through a triangular solve against the Cholesky factor.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
import scipy.linalg as la
from scipy.optimize import bisect
from scipy.special import gammainc

from .exceptions import DegenerateSampleError, DomainError, NotPositiveDefiniteError

logger = logging.getLogger(__name__)

# Smallest squared Cholesky pivot, relative to its own diagonal entry,
# accepted as numerically positive definite.
RANK_TOLERANCE = 1e-12

CHI2_XTOL = 1e-12


def as_data_matrix(values) -> np.ndarray:
    """
    Validate and convert observations to an n x p float matrix.

    Args:
        values: Array-like of shape (n, p), rows are observations

    Returns:
        np.ndarray: float64 matrix

    Raises:
        DomainError: If the input is not 2-D, is empty or holds NaN/Inf
    """
    X = np.asarray(values, dtype=float)
    if X.ndim != 2:
        raise DomainError(f"Expected a 2-D data matrix, got shape {X.shape}")
    n, p = X.shape
    if n < 1 or p < 1:
        raise DomainError(f"Data matrix must have n >= 1 and p >= 1, got {n} x {p}")
    if not np.all(np.isfinite(X)):
        raise DomainError("Data matrix contains NaN or infinite entries")
    return X


def sample_mean(X: np.ndarray) -> np.ndarray:
    """Column means of an n x p matrix."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 1:
        raise DegenerateSampleError("Mean requires at least one observation")
    return X.mean(axis=0)


def sample_covariance(X: np.ndarray) -> np.ndarray:
    """
    Population covariance (divide by n) of the rows of X.

    The 1/n weighting matches the 1/h average inside the MCD objective, so
    determinants of different subsets rank consistently.

    Args:
        X: n x p matrix

    Returns:
        np.ndarray: p x p symmetric matrix

    Raises:
        DegenerateSampleError: If n < 2
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if n < 2:
        raise DegenerateSampleError(f"Covariance requires at least 2 observations, got {n}")
    centered = X - X.mean(axis=0)
    cov = centered.T @ centered / n
    # Stored entries are symmetric bit for bit.
    return (cov + cov.T) / 2.0


def cholesky_factor(M: np.ndarray) -> np.ndarray:
    """
    Lower Cholesky factor of a symmetric positive-definite matrix.

    Args:
        M: Symmetric matrix

    Returns:
        np.ndarray: Lower-triangular L with M = L L^T

    Raises:
        NotPositiveDefiniteError: On a non-positive pivot, or when a squared
            pivot falls below RANK_TOLERANCE times its own diagonal entry
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"Expected a square matrix, got shape {M.shape}")
    try:
        L = la.cholesky(M, lower=True, check_finite=False)
    except la.LinAlgError as e:
        raise NotPositiveDefiniteError(f"Matrix is not positive definite: {e}") from e

    # Scale-free: each pivot against its own diagonal entry.
    diagonal = np.diag(M)
    pivots = np.diag(L) ** 2
    if not np.all(np.isfinite(pivots)) or np.any(diagonal <= 0) or np.any(pivots <= RANK_TOLERANCE * diagonal):
        raise NotPositiveDefiniteError("Matrix is numerically singular")
    return L


def log_det_pd(M: np.ndarray) -> float:
    """
    Log-determinant of a positive-definite matrix, 2 * sum(log(diag(L))).

    Raises:
        NotPositiveDefiniteError: If M is not (numerically) positive definite
    """
    L = cholesky_factor(M)
    return float(2.0 * np.log(np.diag(L)).sum())


def mahalanobis_sq(x: np.ndarray, mu: np.ndarray, scatter: np.ndarray) -> float:
    """
    Squared Mahalanobis distance (x - mu)^T scatter^-1 (x - mu).

    Args:
        x: Observation vector
        mu: Location vector
        scatter: Positive-definite scatter matrix

    Returns:
        float: Non-negative squared distance

    Raises:
        DomainError: If dimensions disagree
        NotPositiveDefiniteError: If scatter is not positive definite
    """
    x = np.asarray(x, dtype=float).ravel()
    mu = np.asarray(mu, dtype=float).ravel()
    if x.shape != mu.shape or np.shape(scatter) != (x.size, x.size):
        raise DomainError(
            f"Dimension mismatch: x {x.shape}, mu {mu.shape}, scatter {np.shape(scatter)}"
        )
    L = cholesky_factor(scatter)
    z = la.solve_triangular(L, x - mu, lower=True, check_finite=False)
    return float(z @ z)


def mahalanobis_sq_rows(X: np.ndarray, mu: np.ndarray, scatter: np.ndarray) -> np.ndarray:
    """Squared Mahalanobis distance of every row of X, with one triangular solve."""
    X = np.asarray(X, dtype=float)
    mu = np.asarray(mu, dtype=float).ravel()
    if X.ndim != 2 or X.shape[1] != mu.size or np.shape(scatter) != (mu.size, mu.size):
        raise DomainError(
            f"Dimension mismatch: X {X.shape}, mu {mu.shape}, scatter {np.shape(scatter)}"
        )
    L = cholesky_factor(scatter)
    Z = la.solve_triangular(L, (X - mu).T, lower=True, check_finite=False)
    return np.einsum('ij,ij->j', Z, Z)


def chi2_cdf(q: float, df: int) -> float:
    """Regularized lower incomplete gamma P(df/2, q/2), the chi-squared CDF."""
    return float(gammainc(df / 2.0, max(q, 0.0) / 2.0))


def chi2_quantile(df: int, prob: float) -> float:
    """
    Chi-squared quantile by bracketed bisection on the incomplete gamma.

    Args:
        df: Degrees of freedom, a positive integer
        prob: Lower-tail probability in [0, 1)

    Returns:
        float: q with P(chi2_df <= q) = prob

    Raises:
        DomainError: If df < 1 or prob is outside [0, 1)
    """
    if isinstance(df, bool) or int(df) != df or df < 1:
        raise DomainError(f"Degrees of freedom must be a positive integer, got {df}")
    if not 0.0 <= prob < 1.0:
        raise DomainError(f"Probability must lie in [0, 1), got {prob}")
    df = int(df)
    if prob == 0.0:
        return 0.0

    upper = float(max(df, 1))
    while chi2_cdf(upper, df) < prob:
        upper *= 2.0
    return float(bisect(lambda q: chi2_cdf(q, df) - prob, 0.0, upper, xtol=CHI2_XTOL, maxiter=500))


@dataclass(frozen=True, eq=False)
class RobustEstimate:
    """
    Robust location and scatter living on a subset of the variables.

    Attributes:
        location: Vector of length d'
        scatter: d' x d' positive-definite matrix
        variables: Strictly increasing indices into the original p variables
        df: Chi-squared degrees of freedom for cutoffs (equal to d')
    """

    location: np.ndarray
    scatter: np.ndarray
    variables: Tuple[int, ...]
    df: int = field(default=0)

    def __post_init__(self):
        variables = tuple(int(v) for v in self.variables)
        object.__setattr__(self, 'variables', variables)
        object.__setattr__(self, 'location', np.asarray(self.location, dtype=float).ravel())
        object.__setattr__(self, 'scatter', np.asarray(self.scatter, dtype=float))
        if self.df == 0:
            object.__setattr__(self, 'df', len(variables))

        dim = len(variables)
        if self.location.size != dim or self.scatter.shape != (dim, dim) or self.df != dim:
            raise DomainError(
                f"Inconsistent estimate: {dim} variables, location {self.location.shape}, "
                f"scatter {self.scatter.shape}, df {self.df}"
            )
        if any(b <= a for a, b in zip(variables, variables[1:])) or (variables and variables[0] < 0):
            raise DomainError(f"Variables must be strictly increasing and non-negative: {variables}")
        if not np.array_equal(self.scatter, self.scatter.T):
            raise DomainError("Scatter matrix must be symmetric")
        # Raises NotPositiveDefiniteError for singular scatter.
        cholesky_factor(self.scatter)

    @classmethod
    def from_sample(cls, sample: np.ndarray, variables: Sequence[int]) -> 'RobustEstimate':
        """Location and covariance of sample restricted to the given variables."""
        restricted = np.asarray(sample, dtype=float)[:, list(variables)]
        return cls(
            location=sample_mean(restricted),
            scatter=sample_covariance(restricted),
            variables=tuple(variables),
        )

    def distances(self, X: np.ndarray) -> np.ndarray:
        """Robust squared distances of every row of X over this estimate's variables."""
        X = np.asarray(X, dtype=float)
        if self.variables and self.variables[-1] >= X.shape[1]:
            raise DomainError(
                f"Estimate uses variable {self.variables[-1]} but data has {X.shape[1]} columns"
            )
        return mahalanobis_sq_rows(X[:, list(self.variables)], self.location, self.scatter)
