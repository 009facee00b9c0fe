"""
Regime dispatch shared by the command line and the benchmark harness.
"""

import logging
from typing import Optional

import numpy as np

from .exceptions import DomainError
from .linalg import as_data_matrix
from .mcd import McdConfig, mcd_fit
from .rssl import DetectionResult, RsslConfig, detect_with_estimate, fit_hd, fit_ld

logger = logging.getLogger(__name__)

MODES = ('ld', 'hd', 'mcd', 'auto')


def resolve_mode(mode: str, n: int, p: int) -> str:
    """Concrete detector for a mode; ``auto`` picks ``hd`` exactly when n < p."""
    if mode not in MODES:
        raise DomainError(f"Unknown detection mode: {mode}")
    if mode == 'auto':
        return 'hd' if n < p else 'ld'
    return mode


def detect(X: np.ndarray, mode: str = 'auto', rssl: Optional[RsslConfig] = None,
           mcd: Optional[McdConfig] = None, workers: int = 1) -> DetectionResult:
    """
    Run one detector on a data matrix.

    Args:
        X: n x p data matrix
        mode: 'ld', 'hd', 'mcd' or 'auto'
        rssl: Ensemble settings; its alpha also sets the MCD cutoff
        mcd: MCD search settings
        workers: Threads for the ensemble draws or MCD starts

    Returns:
        DetectionResult
    """
    X = as_data_matrix(X)
    rssl = rssl or RsslConfig()
    concrete = resolve_mode(mode, *X.shape)
    logger.debug(f"Detecting with mode={concrete} on {X.shape[0]}x{X.shape[1]} data")

    if concrete == 'ld':
        return fit_ld(X, rssl, workers)
    if concrete == 'hd':
        return fit_hd(X, rssl, workers)
    result = mcd_fit(X, mcd or McdConfig(), workers)
    return detect_with_estimate(X, result.estimate, rssl.alpha)
