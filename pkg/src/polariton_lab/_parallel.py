"""Thread-pool map with an environment-variable worker cap.

Sweep points are independent, so scenario drivers farm them out to a small
thread pool.  ``POLARITON_LAB_THREADS`` caps the pool (set it to 1 for
strictly serial runs); results always come back in input order, so output
artifacts do not depend on the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["worker_count", "ordered_map"]

_ENV_VAR = "POLARITON_LAB_THREADS"


def worker_count() -> int:
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return max(os.cpu_count() or 1, 1)
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"{_ENV_VAR} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise ValueError(f"{_ENV_VAR} must be a positive integer, got {raw!r}")
    return n


def ordered_map(fn, items):
    """Map ``fn`` over ``items`` preserving order; serial when 1 worker."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
