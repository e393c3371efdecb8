import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import envs

logger = logging.getLogger(__name__)

J = TypeVar("J")
R = TypeVar("R")


def resolve_workers(workers: Optional[int]) -> int:
    if workers is None:
        workers = envs.WORKERS
    return max(1, int(workers))


def ordered_map(
    fn: Callable[[J], R], jobs: Iterable[J], workers: Optional[int] = None
) -> List[R]:
    """Run ``fn`` over ``jobs``; results come back in job order.

    ``fn`` must be a module-level function when more than one worker is used.
    """
    jobs = list(jobs)
    workers = resolve_workers(workers)
    if workers == 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    logger.debug(f"Dispatching {len(jobs)} jobs to {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def min_reduce(
    fn: Callable[[J], Optional[int]],
    jobs: Iterable[J],
    workers: Optional[int] = None,
    initial: Optional[int] = None,
) -> Optional[int]:
    """Minimum over per-job local minima; None results are ignored."""
    best = initial
    for local in ordered_map(fn, jobs, workers):
        if local is not None and (best is None or local < best):
            best = local
    return best
