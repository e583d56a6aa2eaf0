"""Small shared helpers: big-integer float logs, optional level parallelism."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def log_big(n: int) -> float:
    """Natural log of a positive integer of arbitrary size."""
    if n <= 0:
        raise ValueError("log of a non-positive integer")
    shift = max(0, n.bit_length() - 60)
    return math.log(n >> shift) + shift * math.log(2)


def log_fraction(q: Fraction) -> float:
    if q <= 0:
        raise ValueError("log of a non-positive rational")
    return log_big(q.numerator) - log_big(q.denominator)


def thread_budget() -> int:
    try:
        return max(1, int(os.environ.get("PADENT_THREADS", "1")))
    except ValueError:
        return 1


def map_levels(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Apply fn to every level; results are merged by level index so the
    output is independent of the scheduling."""
    threads = thread_budget()
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
