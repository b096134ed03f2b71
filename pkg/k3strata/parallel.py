"""
Batch maps over worker processes. The point counts and residue DPs are CPU bound, so
they are spread over processes rather than threads.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from .config import resolve_workers

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = 0) -> List[R]:
    """
    Apply func to every item, keeping input order.

    Args:
        func (Callable): A module-level function, so that it can be sent to a worker.
        items (Iterable): Picklable inputs.
        workers (int): Process count; 0 or None means one per CPU. With one worker or
            fewer than two items the map runs in this process.

    Returns:
        list: func(item) for every item.
    """
    items = list(items)
    workers = min(resolve_workers(workers), len(items))
    if workers < 2:
        return [func(item) for item in items]

    chunksize = max(1, len(items) // (4 * workers))
    logger.debug("mapping %s over %d items with %d processes", getattr(func, "__name__", func), len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunksize))
