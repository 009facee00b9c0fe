"""
Random subspace outlier detection.

Every ensemble member pairs a bootstrap draw of the observations with a
random subset of d variables and is scored by the log-determinant of its
restricted covariance. Small determinants point at draws that happen to
leave most outliers out.

- ``fit_ld`` (n >> p): the single best draw supplies location and scatter
  over all p variables; cutoffs use p degrees of freedom.
- ``fit_hd`` (p >> n): the best fraction of draws votes on variables, a
  nested scan over the most frequent ones picks the dimension nu that
  maximizes the best draw's log-determinant, and distances live in those
  nu coordinates.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import (
    ConfigurationError,
    DegenerateSampleError,
    DomainError,
    EstimationFailedError,
    NotPositiveDefiniteError,
)
from .linalg import RobustEstimate, as_data_matrix, chi2_quantile, log_det_pd, sample_covariance
from .parallel import thread_map
from .streams import substream

logger = logging.getLogger(__name__)

K_FRACTION_RANGE = (0.3, 0.8)


@dataclass(frozen=True)
class RsslConfig:
    """
    Random subspace ensemble settings.

    Attributes:
        B: Number of bootstrap draws
        d: Subspace dimension; 0 selects default_subspace_dim(n, p)
        k_fraction: Share of the B draws kept at the elbow, in [0.3, 0.8]
        m: Largest dimension tried by the nested determinant scan
        alpha: Tail probability of the chi-squared cutoff
        seed: 64-bit seed; draw b uses substream(seed, b)
        normalized_scan: Compare log-det / j instead of raw log-det in the scan
        deduplicate: Estimate from the distinct rows of the winning draw
    """

    B: int = 450
    d: int = 0
    k_fraction: float = 0.5
    m: int = 20
    alpha: float = 0.05
    seed: int = 0
    normalized_scan: bool = False
    deduplicate: bool = False

    def __post_init__(self):
        if self.B < 1:
            raise ConfigurationError(f"B must be >= 1, got {self.B}")
        if self.d != 0 and self.d < 2:
            raise ConfigurationError(f"d must be 0 (default rule) or >= 2, got {self.d}")
        low, high = K_FRACTION_RANGE
        if not low <= self.k_fraction <= high:
            raise ConfigurationError(f"k_fraction must lie in [{low}, {high}], got {self.k_fraction}")
        if self.m < 2:
            raise ConfigurationError(f"m must be >= 2, got {self.m}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha}")

    def resolve_dim(self, n: int, p: int) -> int:
        """
        Effective subspace dimension, satisfying 2 <= d <= min(n - 2, p).

        A defaulted dimension is clamped into range; an explicit one that
        falls outside is a configuration error.
        """
        bound = min(n - 2, p)
        if bound < 2:
            raise ConfigurationError(f"No valid subspace dimension for n={n}, p={p}")
        if self.d == 0:
            d = default_subspace_dim(n, p)
            if d > bound:
                logger.warning(f"Default subspace dimension {d} clamped to {bound}")
                d = bound
            return d
        if self.d > bound:
            raise ConfigurationError(f"d={self.d} exceeds min(n - 2, p) = {bound}")
        return self.d


@dataclass(frozen=True, eq=False)
class SubsampleScore:
    """
    One ensemble member.

    Attributes:
        draw: Bootstrap index b (tie-breaker for every selection)
        obs_indices: n observation indices drawn with replacement
        var_indices: d distinct variable indices, increasing
        log_det: Restricted covariance log-determinant, None when degenerate
    """

    draw: int
    obs_indices: np.ndarray
    var_indices: np.ndarray
    log_det: Optional[float]

    @property
    def degenerate(self) -> bool:
        return self.log_det is None

    @property
    def sort_key(self) -> Tuple[float, int]:
        return (self.log_det, self.draw)


@dataclass(frozen=True, eq=False)
class FrequencyTable:
    """
    Variable votes over the retained draws.

    Attributes:
        counts: Occurrences of each of the p variables
        order: Variable indices by descending count, ties by ascending index
    """

    counts: np.ndarray
    order: np.ndarray

    @property
    def voted(self) -> int:
        """Number of variables with a nonzero count."""
        return int(np.count_nonzero(self.counts))


@dataclass(frozen=True, eq=False)
class NestedScan:
    """
    Outcome of the nested determinant scan.

    Attributes:
        nu: Selected dimension
        variables: The nu most frequent variables, increasing
        scores: Compared value for each j tried (None when degenerate)
    """

    nu: int
    variables: Tuple[int, ...]
    scores: Dict[int, Optional[float]] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class DetectionResult:
    """
    Robust estimate, squared distances, cutoff and labels for all n rows.

    labels[i] == 1 exactly when distances[i] > cutoff. The ensemble detectors
    also keep every bootstrap score and, in high dimension, the variable votes.
    """

    estimate: RobustEstimate
    distances: np.ndarray
    cutoff: float
    labels: np.ndarray
    winner: Optional[SubsampleScore] = None
    scan: Optional[NestedScan] = None
    scores: Tuple[SubsampleScore, ...] = ()
    frequencies: Optional[FrequencyTable] = None

    @property
    def df(self) -> int:
        return self.estimate.df

    @property
    def flagged(self) -> int:
        return int(self.labels.sum())


def default_subspace_dim(n: int, p: int) -> int:
    """Subspace dimension max(2, floor(min(n / 5, sqrt(p))))."""
    return max(2, min(n // 5, math.isqrt(p)))


def score_subsamples(X: np.ndarray, config: RsslConfig, workers: int = 1) -> List[SubsampleScore]:
    """
    Score B bootstrap draws by restricted covariance log-determinant.

    Draw b takes n row indices with replacement and d variable indices
    without replacement from substream(config.seed, b). Singular restricted
    covariances are recorded as degenerate rather than resampled.

    Args:
        X: n x p data matrix
        config: Ensemble settings
        workers: Threads scoring draws; the result does not depend on it

    Returns:
        list: B SubsampleScore in draw order
    """
    X = as_data_matrix(X)
    n, p = X.shape
    d = config.d or min(default_subspace_dim(n, p), p)
    if not 2 <= d <= p:
        raise ConfigurationError(f"Subspace dimension {d} must lie in [2, p={p}]")

    def score(draw: int) -> SubsampleScore:
        rng = substream(config.seed, draw)
        obs = rng.integers(0, n, size=n)
        variables = np.sort(rng.choice(p, size=d, replace=False))
        try:
            value = log_det_pd(sample_covariance(X[np.ix_(obs, variables)]))
        except (NotPositiveDefiniteError, DegenerateSampleError):
            value = None
        return SubsampleScore(draw=draw, obs_indices=obs, var_indices=variables, log_det=value)

    scores = thread_map(score, range(config.B), workers)
    degenerate = sum(1 for s in scores if s.degenerate)
    if degenerate:
        logger.debug(f"{degenerate} of {config.B} draws were degenerate")
    return scores


def exclusion_fraction(scores: Sequence[SubsampleScore], n: int) -> float:
    """Mean share of the n original rows absent from a bootstrap draw."""
    if not scores:
        raise DomainError("No draws to summarize")
    return float(np.mean([1.0 - np.unique(s.obs_indices).size / n for s in scores]))


def _ranked(scores: Sequence[SubsampleScore]) -> List[SubsampleScore]:
    ranked = sorted((s for s in scores if not s.degenerate), key=lambda s: s.sort_key)
    if not ranked:
        raise EstimationFailedError(f"All {len(scores)} bootstrap draws were degenerate")
    return ranked


def select_top_k(scores: Sequence[SubsampleScore], k_fraction: float) -> List[SubsampleScore]:
    """
    Keep the ceil(k_fraction * B) draws with the smallest log-determinants.

    Degenerate draws are skipped; ties go to the lower draw index and k is
    clamped to the number of usable draws.

    Raises:
        EstimationFailedError: If every draw is degenerate
    """
    ranked = _ranked(scores)
    k = max(1, math.ceil(k_fraction * len(scores) - 1e-9))
    return ranked[:min(k, len(ranked))]


def variable_frequencies(top: Sequence[SubsampleScore], p: int) -> FrequencyTable:
    """Count variable occurrences across the retained draws."""
    if not top:
        raise DomainError("Frequency table needs at least one draw")
    counts = np.bincount(np.concatenate([s.var_indices for s in top]), minlength=p)
    order = np.lexsort((np.arange(p), -counts))
    return FrequencyTable(counts=counts, order=order)


def nested_det_scan(sample: np.ndarray, freq: FrequencyTable, m: int,
                    normalized: bool = False) -> NestedScan:
    """
    Pick the dimension whose leading variables maximize the log-determinant.

    For j = 2..m the covariance of ``sample`` restricted to the j most
    frequent variables is scored; nu is the argmax (smallest j on ties).
    m is clamped to the number of voted variables and singular j are skipped.

    Args:
        sample: Rows of the winning bootstrap draw, all p columns
        freq: Variable votes
        m: Largest dimension to try
        normalized: Compare log-det / j instead of the raw log-det

    Raises:
        DomainError: If m < 2
        EstimationFailedError: If no j yields a usable covariance
    """
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    upper = min(m, freq.voted)
    if upper < m:
        logger.debug(f"Nested scan limited to {upper} voted variables (m={m})")

    scores: Dict[int, Optional[float]] = {}
    best_j = None
    for j in range(2, upper + 1):
        variables = np.sort(freq.order[:j])
        try:
            value = log_det_pd(sample_covariance(sample[:, variables]))
        except (NotPositiveDefiniteError, DegenerateSampleError):
            scores[j] = None
            continue
        if normalized:
            value /= j
        scores[j] = value
        if best_j is None or value > scores[best_j]:
            best_j = j

    if best_j is None:
        raise EstimationFailedError(f"Nested determinant scan found no usable dimension in 2..{upper}")
    variables = tuple(int(v) for v in np.sort(freq.order[:best_j]))
    return NestedScan(nu=best_j, variables=variables, scores=scores)


def classify(distances: np.ndarray, df: int, alpha: float) -> np.ndarray:
    """Label 1 every distance strictly above chi2_quantile(df, 1 - alpha)."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    cutoff = chi2_quantile(df, 1.0 - alpha)
    return (np.asarray(distances, dtype=float) > cutoff).astype(np.int64)


def _estimate(sample: np.ndarray, variables: Sequence[int]) -> RobustEstimate:
    try:
        return RobustEstimate.from_sample(sample, variables)
    except (NotPositiveDefiniteError, DegenerateSampleError) as e:
        raise EstimationFailedError(f"Robust scatter is singular: {e}") from e


def _winning_rows(winner: SubsampleScore, deduplicate: bool) -> np.ndarray:
    return np.unique(winner.obs_indices) if deduplicate else winner.obs_indices


def detect_with_estimate(X: np.ndarray, estimate: RobustEstimate, alpha: float, **extra) -> DetectionResult:
    """Distances of every row under estimate, classified against chi2_quantile(df, 1 - alpha)."""
    distances = estimate.distances(X)
    cutoff = chi2_quantile(estimate.df, 1.0 - alpha)
    labels = classify(distances, estimate.df, alpha)
    return DetectionResult(estimate=estimate, distances=distances, cutoff=cutoff, labels=labels, **extra)


def fit_ld(X: np.ndarray, config: Optional[RsslConfig] = None, workers: int = 1) -> DetectionResult:
    """
    Random subspace detection for n >> p.

    The draw with the smallest usable log-determinant supplies location and
    scatter over all p variables; cutoff chi2_quantile(p, 1 - alpha).

    Raises:
        ConfigurationError: Unless p < n / 2
        EstimationFailedError: If every draw is degenerate or the winning
            full-dimensional covariance is singular
    """
    config = config or RsslConfig()
    X = as_data_matrix(X)
    n, p = X.shape
    if not 2 * p < n:
        raise ConfigurationError(f"fit_ld requires p < n/2, got n={n}, p={p}")
    d = config.resolve_dim(n, p)

    scores = score_subsamples(X, _with_dim(config, d), workers)
    winner = _ranked(scores)[0]
    estimate = _estimate(X[_winning_rows(winner, config.deduplicate)], range(p))
    result = detect_with_estimate(X, estimate, config.alpha, winner=winner, scores=tuple(scores))

    logger.info(
        f"RSSL-LD fit: n={n} p={p} d={d} B={config.B} winner={winner.draw} "
        f"cutoff={result.cutoff:.6g} flagged={result.flagged}"
    )
    return result


def fit_hd(X: np.ndarray, config: Optional[RsslConfig] = None, workers: int = 1) -> DetectionResult:
    """
    Random subspace detection for n << p.

    score_subsamples -> select_top_k -> variable_frequencies ->
    nested_det_scan on the best draw -> estimate on the nu selected
    variables -> distances for all rows with cutoff chi2_quantile(nu, 1 - alpha).

    Raises:
        ConfigurationError: Unless n < p
        EstimationFailedError: Propagated from the selection stages
    """
    config = config or RsslConfig()
    X = as_data_matrix(X)
    n, p = X.shape
    if not n < p:
        raise ConfigurationError(f"fit_hd requires n < p, got n={n}, p={p}")
    d = config.resolve_dim(n, p)

    scores = score_subsamples(X, _with_dim(config, d), workers)
    top = select_top_k(scores, config.k_fraction)
    freq = variable_frequencies(top, p)
    winner = top[0]
    scan = nested_det_scan(X[winner.obs_indices], freq, config.m, normalized=config.normalized_scan)
    estimate = _estimate(X[_winning_rows(winner, config.deduplicate)], scan.variables)
    result = detect_with_estimate(
        X, estimate, config.alpha, winner=winner, scan=scan, scores=tuple(scores), frequencies=freq
    )

    logger.info(
        f"RSSL-HD fit: n={n} p={p} d={d} B={config.B} k={len(top)} nu={scan.nu} "
        f"cutoff={result.cutoff:.6g} flagged={result.flagged}"
    )
    return result


def _with_dim(config: RsslConfig, d: int) -> RsslConfig:
    if config.d == d:
        return config
    return replace(config, d=d)
