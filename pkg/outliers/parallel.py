"""
Order-preserving work distribution.

Results always come back in input order, so reductions over them are
independent of how many workers ran.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from multiprocessing import Pool
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def thread_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Apply func to every item on a thread pool, keeping input order.

    Suited to numpy-heavy work that releases the GIL inside LAPACK.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def process_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Apply a picklable module-level func to every item on a process pool.

    Falls back to a plain loop for a single worker.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug(f"Distributing {len(items)} work items over {workers} processes")
    with Pool(processes=workers) as pool:
        return pool.map(func, items)
