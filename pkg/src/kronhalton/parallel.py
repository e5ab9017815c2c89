"""Worker-count control for the embarrassingly parallel loops.

Results are always reduced in submission order, so the outcome does not
depend on scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_threads: Optional[int] = None


def set_threads(n: Optional[int]) -> None:
    """Cap worker threads (``None`` restores the default)."""
    global _threads
    if n is not None and n < 1:
        raise ValueError("threads must be >= 1")
    _threads = n


def get_threads() -> int:
    if _threads is not None:
        return _threads
    return max(1, min(8, os.cpu_count() or 1))


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> list[R]:
    """``[fn(x) for x in items]``, possibly on a thread pool."""
    items = list(items)
    n = threads if threads is not None else get_threads()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
