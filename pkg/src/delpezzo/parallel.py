"""Order-preserving process pool used by the counting routines.

Work is always cut into chunks that depend only on the problem, never on
the number of workers, and results come back in chunk order. Sums over
the returned list are therefore identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_WORKERS = "DELPEZZO_WORKERS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(ENV_WORKERS, "1")))
    except ValueError:
        return 1


def pmap(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    items = list(items)
    w = default_workers() if workers is None else max(1, int(workers))
    if w == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(w, len(items))) as ex:
        return list(ex.map(fn, items))
