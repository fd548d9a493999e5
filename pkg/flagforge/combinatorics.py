"""Exact integer arithmetic: binomials and clique counts of complete multipartite graphs.

Every count in the package funnels through here. Edge conventions live in one
place: ``turan_count(n, k, r)`` is 0 whenever ``k < 0``, ``n < 0``, ``k > r`` or
``n < k``, and ``turan_count(n, 0, r)`` is 1 for ``n >= 0``.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from functools import lru_cache

TuranParts = tuple[int, ...]


def binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def turan_parts(n: int, r: int) -> TuranParts:
    """Balanced split of ``n`` vertices into ``r`` parts, largest parts first."""
    if r < 1:
        raise ValueError(f"turan_parts needs r >= 1, got {r}")
    if n < 0:
        raise ValueError(f"turan_parts needs n >= 0, got {n}")
    size, big = divmod(n, r)
    return (size + 1,) * big + (size,) * (r - big)


@lru_cache(maxsize=1 << 16)
def turan_count(n: int, k: int, r: int) -> int:
    """Number of k-cliques in the Turán graph T_{n,r}."""
    if n < 0 or k < 0:
        return 0
    if k == 0:
        return 1
    if k > r or n < k:
        return 0
    p, q = divmod(n, r)
    return sum(binom(q, i) * binom(r - i, k - i) * p ** (k - i) for i in range(min(q, k) + 1))


def turan_recurrence(n: int, k: int, r: int) -> int:
    """Right-hand side of T(n,k,r) = T(n-1,k,r) + T(n-p-1,k-1,r-1), p = floor((n-1)/r)."""
    p = (n - 1) // r
    return turan_count(n - 1, k, r) + turan_count(n - p - 1, k - 1, r - 1)


def multipartite_count(parts: Iterable[int], k: int) -> int:
    """Elementary symmetric polynomial e_k of the part sizes."""
    if k < 0:
        return 0
    sym = [1] + [0] * k
    for size in parts:
        if size < 0:
            raise ValueError(f"part sizes must be nonnegative, got {size}")
        for j in range(k, 0, -1):
            sym[j] += sym[j - 1] * size
    return sym[k]


def multipartite_profile(parts: Iterable[int], max_card: int) -> list[int]:
    """[e_0, e_1, ..., e_max_card] in one pass."""
    sym = [1] + [0] * max_card
    for size in parts:
        for j in range(max_card, 0, -1):
            sym[j] += sym[j - 1] * size
    return sym


def greatest_fit(count: Callable[[int], int], m: int, start: int = 0) -> int:
    """Largest n >= start with count(n) <= m.

    ``count`` must be non-decreasing and unbounded, and ``count(start) <= m``.
    """
    lo = start
    step = 1
    hi = lo + step
    while count(hi) <= m:
        lo = hi
        step *= 2
        hi = lo + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if count(mid) <= m:
            lo = mid
        else:
            hi = mid
    return lo


def greatest_binom_top(m: int, k: int) -> int:
    """Largest n with binom(n, k) <= m (k >= 1)."""
    return greatest_fit(lambda n: binom(n, k), m, start=k - 1)


def greatest_turan_top(m: int, k: int, r: int) -> int:
    """Largest n with turan_count(n, k, r) <= m (1 <= k <= r)."""
    return greatest_fit(lambda n: turan_count(n, k, r), m, start=k - 1)
