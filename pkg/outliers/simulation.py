"""
Contaminated multivariate Gaussian simulator.

Draws datasets from the mixture (1 - eps) N(0, S) + eps N(eta * 1, gamma * S)
where S is the equicorrelation ("AR-type") matrix (1 - rho) I + rho 1 1^T.
Outlier counts are exact, round(eps * n), and every dataset is a pure
function of its configuration.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, DomainError
from .linalg import cholesky_factor
from .streams import substream

logger = logging.getLogger(__name__)

INLIER = 0
OUTLIER = 1


@dataclass(frozen=True)
class ContaminationConfig:
    """
    Parameters of one simulated dataset.

    Attributes:
        n: Observation count
        p: Dimension
        epsilon: Contamination rate in [0, 0.5)
        eta: Location shift applied to every coordinate of an outlier
        gamma: Scatter inflation factor of the outlier component (> 0)
        rho: Equicorrelation in [0, 1)
        seed: 64-bit seed
    """

    n: int
    p: int
    epsilon: float = 0.1
    eta: float = 5.0
    gamma: float = 5.0
    rho: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ConfigurationError(f"n and p must be positive, got n={self.n}, p={self.p}")
        if not 0.0 <= self.epsilon < 0.5:
            raise ConfigurationError(f"epsilon must lie in [0, 0.5), got {self.epsilon}")
        if not self.gamma > 0.0:
            raise ConfigurationError(f"gamma must be positive, got {self.gamma}")
        if not 0.0 <= self.rho < 1.0:
            raise ConfigurationError(f"rho must lie in [0, 1), got {self.rho}")

    @property
    def n_outliers(self) -> int:
        """Exact outlier count, round(epsilon * n) with halves rounded up."""
        return int(math.floor(self.epsilon * self.n + 0.5))


@dataclass(frozen=True, eq=False)
class SimulatedDataset:
    """Observations, ground-truth labels (1 = outlier) and the generating config."""

    data: np.ndarray
    labels: np.ndarray
    config: ContaminationConfig

    @property
    def outlier_count(self) -> int:
        return int(self.labels.sum())


def ar_covariance(p: int, rho: float) -> np.ndarray:
    """
    Equicorrelation matrix (1 - rho) I_p + rho 1_p 1_p^T.

    Raises:
        DomainError: If p < 1 or rho is outside [0, 1)
    """
    if p < 1:
        raise DomainError(f"Dimension must be positive, got {p}")
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"rho must lie in [0, 1), got {rho}")
    return (1.0 - rho) * np.eye(p) + rho * np.ones((p, p))


def _draw(mu: np.ndarray, chol: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((count, chol.shape[0]))
    return mu + z @ chol.T


def sample_mvn(mu, scatter, count: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw count rows mu + L z with L the Cholesky factor of scatter.

    Args:
        mu: Location vector of length p
        scatter: p x p positive-definite matrix
        count: Number of rows
        rng: Random stream, advanced by count * p standard normals

    Returns:
        np.ndarray: count x p matrix

    Raises:
        NotPositiveDefiniteError: If scatter is not positive definite
    """
    mu = np.asarray(mu, dtype=float).ravel()
    chol = cholesky_factor(scatter)
    if chol.shape[0] != mu.size:
        raise DomainError(f"mu has length {mu.size} but scatter is {chol.shape[0]} x {chol.shape[0]}")
    return _draw(mu, chol, count, rng)


def sample_dataset(config: ContaminationConfig) -> SimulatedDataset:
    """
    Draw one epsilon-contaminated dataset.

    Inliers come from N(0, S), exactly round(epsilon * n) outliers from
    N(eta * 1_p, gamma * S); rows are shuffled by the seeded stream.

    Raises:
        ConfigurationError: If the outlier count reaches n
    """
    n_out = config.n_outliers
    if n_out >= config.n:
        raise ConfigurationError(f"Outlier count {n_out} must be smaller than n={config.n}")

    rng = substream(config.seed)
    chol = cholesky_factor(ar_covariance(config.p, config.rho))
    inliers = _draw(np.zeros(config.p), chol, config.n - n_out, rng)
    outliers = _draw(np.full(config.p, float(config.eta)), math.sqrt(config.gamma) * chol, n_out, rng)

    data = np.vstack([inliers, outliers])
    labels = np.concatenate([
        np.full(config.n - n_out, INLIER, dtype=np.int64),
        np.full(n_out, OUTLIER, dtype=np.int64),
    ])
    order = rng.permutation(config.n)

    logger.debug(f"Simulated dataset n={config.n} p={config.p} outliers={n_out} seed={config.seed}")
    return SimulatedDataset(data=data[order], labels=labels[order], config=config)
