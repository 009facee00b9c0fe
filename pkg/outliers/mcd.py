"""
Minimum Covariance Determinant by concentration steps.

Plain C-steps from seeded random h-subsets, keeping the start with the
smallest covariance log-determinant. No reweighting and no FAST-MCD nesting:
this is the low-dimensional baseline the random subspace detectors are
checked against.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .exceptions import ConfigurationError, EstimationFailedError, NotPositiveDefiniteError
from .linalg import RobustEstimate, as_data_matrix, log_det_pd, mahalanobis_sq_rows, sample_covariance
from .parallel import thread_map
from .streams import substream

logger = logging.getLogger(__name__)

# Smallest objective decrease that counts as progress.
CONVERGENCE_TOL = 1e-12


@dataclass(frozen=True)
class McdConfig:
    """
    MCD search settings.

    Attributes:
        h: Subset size; None selects default_h(n, p)
        n_starts: Number of random initial subsets
        max_iter: C-step cap per start
        seed: 64-bit seed; start s draws from substream(seed, s)
    """

    h: Optional[int] = None
    n_starts: int = 10
    max_iter: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.n_starts < 1:
            raise ConfigurationError(f"n_starts must be >= 1, got {self.n_starts}")
        if self.max_iter < 1:
            raise ConfigurationError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.h is not None and self.h < 1:
            raise ConfigurationError(f"h must be positive, got {self.h}")

    def resolve_h(self, n: int, p: int) -> int:
        """
        Subset size for an n x p dataset.

        Raises:
            ConfigurationError: Unless n/2 <= h < n and p < h
        """
        h = default_h(n, p) if self.h is None else self.h
        if not (2 * h >= n and h < n):
            raise ConfigurationError(f"h must satisfy n/2 <= h < n, got h={h} for n={n}")
        if p >= h:
            raise ConfigurationError(
                f"h={h} must exceed the dimension p={p}, otherwise every subset covariance is singular"
            )
        return h


@dataclass(frozen=True, eq=False)
class ConcentrationPath:
    """Outcome of iterating C-steps from one initial subset."""

    indices: np.ndarray
    objective: float
    iterations: int
    history: List[float] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class McdResult:
    """
    Winning MCD subset and its estimate.

    Attributes:
        estimate: Location/scatter of the winning subset over all p variables
        h_indices: Sorted indices of the winning subset H
        objective: Log-determinant of the winning covariance
        iterations: C-steps executed by the winning start
        start: Index of the winning start
        history: Objective after every C-step of the winning start
    """

    estimate: RobustEstimate
    h_indices: np.ndarray
    objective: float
    iterations: int
    start: int
    history: List[float]


def default_h(n: int, p: int) -> int:
    """Breakdown-optimal subset size floor((n + p + 1) / 2), clamped into [ceil(n/2), n - 1]."""
    h = (n + p + 1) // 2
    return max(math.ceil(n / 2), min(h, n - 1))


def subset_log_det(X: np.ndarray, H: Sequence[int]) -> float:
    """Log-determinant of the covariance of the rows H of X."""
    return log_det_pd(sample_covariance(X[np.asarray(H)]))


def c_step(X: np.ndarray, H: Sequence[int]) -> np.ndarray:
    """
    One concentration step.

    Args:
        X: n x p data matrix
        H: Current subset of h row indices

    Returns:
        np.ndarray: Sorted indices of the h rows closest to the mean and
            covariance of X[H] in Mahalanobis distance (ties by row index)

    Raises:
        NotPositiveDefiniteError: If the covariance of X[H] is singular
    """
    X = np.asarray(X, dtype=float)
    H = np.asarray(H)
    subset = X[H]
    distances = mahalanobis_sq_rows(X, subset.mean(axis=0), sample_covariance(subset))
    closest = np.argsort(distances, kind='stable')[:H.size]
    return np.sort(closest)


def concentrate(X: np.ndarray, H: Sequence[int], max_iter: int = 100) -> ConcentrationPath:
    """
    Iterate C-steps until the subset is a fixed point, the log-determinant
    decrease drops below CONVERGENCE_TOL, or max_iter steps have run.

    Raises:
        NotPositiveDefiniteError: If a visited subset has a singular covariance
    """
    X = np.asarray(X, dtype=float)
    current = np.sort(np.asarray(H))
    objective = subset_log_det(X, current)
    history = [objective]
    iterations = 0

    while iterations < max_iter:
        candidate = c_step(X, current)
        candidate_objective = subset_log_det(X, candidate)
        iterations += 1
        history.append(candidate_objective)

        if np.array_equal(candidate, current):
            break
        decrease = objective - candidate_objective
        if decrease < 0:
            # Rounding made the step worse; the current subset stands.
            break
        current, objective = candidate, candidate_objective
        if decrease < CONVERGENCE_TOL:
            break

    return ConcentrationPath(indices=current, objective=objective, iterations=iterations, history=history)


def initial_subset(n: int, h: int, seed: int, start: int) -> np.ndarray:
    """Random h-subset for one start, drawn from substream(seed, start)."""
    rng = substream(seed, start)
    return np.sort(rng.choice(n, size=h, replace=False))


def mcd_fit(X: np.ndarray, config: Optional[McdConfig] = None, workers: int = 1) -> McdResult:
    """
    Minimum Covariance Determinant estimate with random restarts.

    Args:
        X: n x p data matrix
        config: Search settings (defaults to McdConfig())
        workers: Threads used to run starts; results do not depend on it

    Returns:
        McdResult: the start with the smallest log-determinant (ties by
            lowest start index)

    Raises:
        ConfigurationError: If h is invalid for the data shape
        EstimationFailedError: If every start hits a singular covariance
    """
    config = config or McdConfig()
    X = as_data_matrix(X)
    n, p = X.shape
    h = config.resolve_h(n, p)

    def run_start(start: int) -> Optional[ConcentrationPath]:
        try:
            return concentrate(X, initial_subset(n, h, config.seed, start), config.max_iter)
        except NotPositiveDefiniteError as e:
            logger.debug(f"MCD start {start} discarded: {e}")
            return None

    paths = thread_map(run_start, range(config.n_starts), workers)

    best_start = None
    for start, path in enumerate(paths):
        if path is None:
            continue
        if best_start is None or path.objective < paths[best_start].objective:
            best_start = start
    if best_start is None:
        raise EstimationFailedError(f"All {config.n_starts} MCD starts produced singular covariances")

    best = paths[best_start]
    try:
        estimate = RobustEstimate.from_sample(X[best.indices], range(p))
    except NotPositiveDefiniteError as e:
        raise EstimationFailedError(f"MCD estimate is singular: {e}") from e

    logger.info(
        f"MCD fit: n={n} p={p} h={h} objective={best.objective:.6g} "
        f"start={best_start} iterations={best.iterations}"
    )
    return McdResult(
        estimate=estimate,
        h_indices=best.indices,
        objective=best.objective,
        iterations=best.iterations,
        start=best_start,
        history=best.history,
    )
