"""Binomial coefficients and colex ranking of m-subsets of {1..n}.

Subsets are plain tuples of strictly increasing 1-based integers. Colex
order compares two sets by their largest differing element, which is the
same as ordering by the bitmask ``sum(1 << (x - 1))``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Tuple

MAX_N = 64

Subset = Tuple[int, ...]


class RangeError(ValueError):
    """Raised when an argument leaves the supported combinatorial range."""


def _check_nk(n: int, k: int) -> None:
    if n < 0 or k < 0:
        raise RangeError(f"negative argument: n={n}, k={k}")
    if n > MAX_N:
        raise RangeError(f"n={n} exceeds supported maximum {MAX_N}")


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    if k > n:
        return 0
    k = min(k, n - k)
    out = 1
    for i in range(1, k + 1):
        out = out * (n - k + i) // i
    return out


def binom(n: int, k: int) -> int:
    """Exact C(n, k) for 0 <= n <= 64; zero when k > n."""
    _check_nk(n, k)
    return _binom(n, k)


def enumerate_subsets(n: int, k: int) -> list[Subset]:
    """All k-subsets of {1..n} in colex order."""
    _check_nk(n, k)
    if k > n:
        raise RangeError(f"k={k} exceeds n={n}")
    return list(_colex_iter(n, k))


def _colex_iter(n: int, k: int) -> Iterator[Subset]:
    if k == 0:
        yield ()
        return
    cur = list(range(1, k + 1))
    while True:
        yield tuple(cur)
        # bump the lowest element that has room, reset the ones below it
        i = 0
        while i < k - 1 and cur[i] + 1 == cur[i + 1]:
            i += 1
        if i == k - 1 and cur[i] == n:
            return
        cur[i] += 1
        for t in range(i):
            cur[t] = t + 1


def colex_rank(s: Sequence[int]) -> int:
    """Colex rank without range checks; the rank does not depend on n."""
    return sum(_binom(x - 1, i) for i, x in enumerate(s, start=1))


def rank(s: Sequence[int], n: int) -> int:
    """Colex rank of the subset ``s`` of {1..n}."""
    k = len(s)
    _check_nk(n, k)
    prev = 0
    r = 0
    for i, x in enumerate(s, start=1):
        if not (prev < x <= n):
            raise RangeError(f"{tuple(s)} is not a strictly increasing subset of 1..{n}")
        r += _binom(x - 1, i)
        prev = x
    return r


def unrank(r: int, n: int, k: int) -> Subset:
    """Inverse of :func:`rank` for k-subsets of {1..n}."""
    _check_nk(n, k)
    if k > n or not (0 <= r < _binom(n, k)):
        raise RangeError(f"rank {r} out of range for C({n},{k})")
    out = [0] * k
    x = n
    for i in range(k, 0, -1):
        # largest x with C(x-1, i) <= r
        while _binom(x - 1, i) > r:
            x -= 1
        out[i - 1] = x
        r -= _binom(x - 1, i)
        x -= 1
    return tuple(out)


def mask(s: Iterable[int]) -> int:
    """Bitmask of a subset; sorting by it gives colex order across sizes."""
    out = 0
    for x in s:
        out |= 1 << (x - 1)
    return out
