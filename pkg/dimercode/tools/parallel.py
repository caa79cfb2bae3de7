"""Ordered data-parallel map over chunks of work."""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Optional, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def default_threads() -> int:
    """Machine parallelism."""
    return os.cpu_count() or 1


def chunk_ranges(total: int, chunk_size: int) -> list[tuple[int, int]]:
    """Contiguous [start, stop) ranges covering 0..total."""
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    return [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def ordered_map(
    fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None
) -> list[R]:
    """
    Apply ``fn`` to every item, results in input order.

    ``threads=1`` runs serially in-process and is the reference path; larger
    values fan out to worker processes. ``fn`` and the items must be picklable
    for the parallel path.
    """
    work: Sequence[T] = list(items)
    workers = threads if threads is not None else default_threads()
    if workers <= 1 or len(work) <= 1:
        return [fn(item) for item in work]

    workers = min(workers, len(work))
    logger.debug("mapping %d chunks over %d processes", len(work), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, work))
