"""Deterministic fan-out of independent indexed work items.

Results are returned in index order no matter how many workers run or in
what order they finish, so artifacts are identical for every pool width.
Workers are threads: objective evaluations are pure and release no locks,
and the contract here is determinism, not speedup.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

T = TypeVar("T")


def parallel_map(fn: Callable[[int], T], count: int, width: int = 1) -> list[T]:
    """[fn(0), ..., fn(count-1)], computed by up to ``width`` workers."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if width <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=width) as pool:
        return list(pool.map(fn, range(count)))
