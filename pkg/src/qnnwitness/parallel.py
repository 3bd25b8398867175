"""Deterministic worker mapping capped by the QNN_THREADS env var.

Results always come back in input order, so reductions are reproducible
regardless of thread count. The default of one worker keeps everything
sequential.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    raw = os.environ.get("QNN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def map_ordered(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """map() preserving input order, threaded when QNN_THREADS > 1."""
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
