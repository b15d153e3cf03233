"""Deterministic helpers for optional thread parallelism.

Work is split per item and results are always merged back in input order,
so the output is identical no matter how many worker threads run.
"""

from concurrent.futures import ThreadPoolExecutor


def parallel_map(fn, items, threads=1):
    """Map ``fn`` over ``items``, preserving input order in the result list."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
