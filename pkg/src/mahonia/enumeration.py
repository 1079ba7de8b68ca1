"""Enumeration budget and order-independent parallel reduction."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from typing import Callable, Sequence

DEFAULT_BUDGET = 5_000_000

_override: int | None = None


class BudgetExceeded(RuntimeError):
    """An enumeration would visit more objects than the configured budget."""


def budget() -> int:
    if _override is not None:
        return _override
    env = os.environ.get("MAHONIA_BUDGET")
    if env:
        value = int(env)
        if value <= 0:
            raise ValueError("MAHONIA_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


@contextmanager
def budget_override(limit: int):
    global _override
    if limit <= 0:
        raise ValueError("budget must be positive")
    saved, _override = _override, limit
    try:
        yield
    finally:
        _override = saved


def check_budget(size: int, limit: int | None = None, what: str = "enumeration") -> None:
    limit = budget() if limit is None else limit
    if size > limit:
        raise BudgetExceeded(f"{what} of size {size} exceeds budget {limit}")


def reduce_counters(work: Callable[..., Counter], blocks: Sequence[tuple],
                    jobs: int = 1) -> Counter:
    """Sum ``work(*block)`` over ``blocks``.

    Counter addition is commutative, so the result does not depend on
    scheduling.  ``work`` must be a picklable top-level function when
    ``jobs > 1``.
    """
    total: Counter = Counter()
    if jobs <= 1 or len(blocks) <= 1:
        for block in blocks:
            total.update(work(*block))
        return total
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(work, *zip(*blocks)):
            total.update(part)
    return total
