from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "EDISCO_THREADS"


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit argument, else ``$EDISCO_THREADS``, else 1."""
    if workers is None:
        raw = os.environ.get(ENV_THREADS, "").strip()
        workers = int(raw) if raw else 1
    return max(1, int(workers))


def ordered_map(func, items, workers: int | None = None) -> list:
    """``[func(x) for x in items]``, optionally spread over threads.

    Results come back in input order, so output never depends on the
    worker count.
    """
    n = resolve_workers(workers)
    items = list(items)
    if n == 1 or len(items) < 2:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))
