"""Worker-thread plumbing with deterministic, order-preserving reductions."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from contextvars import ContextVar

_threads: ContextVar[int] = ContextVar("singspec_threads", default=1)


def resolve_threads(explicit=None) -> int:
    """Thread count from the explicit flag, SSPEC_THREADS, or 1."""
    if explicit is not None:
        n = int(explicit)
    else:
        env = os.environ.get("SSPEC_THREADS")
        n = int(env) if env else 1
    if n < 1:
        raise ValueError("thread count must be >= 1")
    return n


def set_threads(n: int) -> None:
    _threads.set(int(n))


def get_threads() -> int:
    return _threads.get()


def pmap(fn, items):
    """map() preserving input order; uses a thread pool when configured."""
    items = list(items)
    n = get_threads()
    if n <= 1 or len(items) < 4:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
