"""Deterministic worker pools.

Every parallel entry point in this package maps a pure function over
immutable work items and collects the results in submission order, so the
output is identical for any thread count.  `threads=1` bypasses the pool
entirely; `threads=None` uses one worker per available core.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def default_thread_count() -> int:
    return os.cpu_count() or 1


def resolve_thread_count(threads: int | None) -> int:
    if threads is None:
        return default_thread_count()
    if threads < 1:
        raise ValueError("thread count must be at least 1")
    return threads


def parallel_map(
    fn: Callable[[T], R], items: Iterable[T], threads: int | None = 1
) -> list[R]:
    """[fn(x) for x in items], running the calls on a worker pool when
    threads > 1.  Result order matches item order regardless of schedule."""
    work = list(items)
    count = resolve_thread_count(threads)
    if count == 1 or len(work) <= 1:
        return [fn(x) for x in work]
    with ThreadPoolExecutor(max_workers=min(count, len(work))) as pool:
        return list(pool.map(fn, work))
