"""Ordered thread-pool map controlled by the IGLAB_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "IGLAB_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        k = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}") from None
    if k < 1:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    return k


def pmap(fn, items):
    """list(map(fn, items)), possibly threaded; results keep the input order,
    so every later reduction runs in a fixed order regardless of threads."""
    items = list(items)
    k = thread_count()
    if k == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=k) as ex:
        return list(ex.map(fn, items))
