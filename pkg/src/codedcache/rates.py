"""Exact rate formulas, the Maddah-Ali--Niesen baseline and memory sharing.

Every value here is a :class:`fractions.Fraction`; floats are only produced
by the CLI for display.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Sequence, Tuple

from codedcache.combinatorics import binom
from codedcache.delivery import j_window, optimal_j

SOURCES = ("scheme", "mn-baseline", "chen", "endpoint", "hull-vertex")


@dataclass(frozen=True)
class RatePoint:
    M: Fraction
    R: Fraction
    source: str = "scheme"

    def __post_init__(self):
        object.__setattr__(self, "M", Fraction(self.M))
        object.__setattr__(self, "R", Fraction(self.R))
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")

    def __str__(self) -> str:
        return f"({self.M}, {self.R})"


def _check_split(K: int, m: int, L: int) -> None:
    if not 1 <= m <= K - 1:
        raise ValueError(f"m={m} outside 1..K-1 for K={K}")
    if not 1 <= L <= K - 1:
        raise ValueError(f"L={L} outside 1..K-1 for K={K}")


def step3_count(K: int, m: int, L: int, j: int) -> int:
    lo, hi = max(0, m - L + 1), min(j - 1, K - L)
    return sum(binom(K - L, i) * binom(L - 1, m - i) for i in range(lo, hi + 1))


def step4_count(K: int, m: int, L: int, j: int) -> int:
    lo, hi = max(j, m - L), min(m, K - L - 1)
    return sum(binom(K - L - 1, i) * binom(L, m - i) for i in range(lo, hi + 1))


def rate_with_j(K: int, m: int, L: int, j: int) -> Fraction:
    """Delivery rate for split L and threshold j (message count over C(K, m))."""
    _check_split(K, m, L)
    lo, hi = j_window(K, m, L)
    if not lo <= j <= hi:
        raise ValueError(f"j={j} outside window [{lo}, {hi}]")
    extra = step3_count(K, m, L, j) + step4_count(K, m, L, j)
    return 1 + Fraction(extra, binom(K, m))


def rate_L(K: int, m: int, L: int) -> Fraction:
    _check_split(K, m, L)
    return rate_with_j(K, m, L, optimal_j(K, m, L))


def rate(K: int, m: int) -> Fraction:
    """Worst-case rate over splits L = 1..K-1 at cache size m/K."""
    if not 1 <= m <= K - 1:
        raise ValueError(f"m={m} outside 1..K-1 for K={K}")
    return max(rate_L(K, m, L) for L in range(1, K))


def worst_splits(K: int, m: int) -> List[int]:
    r = rate(K, m)
    return [L for L in range(1, K) if rate_L(K, m, L) == r]


def mn_rate(K: int, M) -> Fraction:
    """Centralized Maddah-Ali--Niesen rate for N=2 files.

    Defined on the grid M = 2t/K; the point M = (K-1)/K for odd K is also
    accepted.
    """
    M = Fraction(M)
    N = 2
    on_grid = (M * K / N).denominator == 1 and 0 <= M <= N
    special = K % 2 == 1 and M == Fraction(K - 1, K)
    if not (on_grid or special):
        raise ValueError(f"M={M} is not on the 2t/K grid for K={K}")
    return K * (1 - M / N) * min(1 / (1 + M * K / N), Fraction(N, K))


def chen_point(K: int) -> RatePoint:
    if K < 2:
        raise ValueError("K must be at least 2")
    return RatePoint(Fraction(1, K), Fraction(2 * (K - 1), K), "chen")


def cutset_lower_bound(K: int, M) -> Fraction:
    """Classical cut-set bound for two files: max(2 - 2M, 1 - M/2, 0).

    This bound is the standard one and is not derived from the scheme.
    """
    M = Fraction(M)
    if not 0 <= M <= 2:
        raise ValueError(f"M={M} outside [0, 2]")
    return max(2 - 2 * M, 1 - M / 2, Fraction(0))


def achievable_points(K: int) -> List[RatePoint]:
    pts = [RatePoint(Fraction(m, K), rate(K, m), "scheme") for m in range(1, K)]
    for t in range(0, K + 1):
        M = Fraction(2 * t, K)
        pts.append(RatePoint(M, mn_rate(K, M), "endpoint" if t == 0 else "mn-baseline"))
    return pts


def _cross(o: RatePoint, a: RatePoint, b: RatePoint) -> Fraction:
    return (a.M - o.M) * (b.R - o.R) - (a.R - o.R) * (b.M - o.M)


def lower_hull(points: Iterable[RatePoint]) -> List[RatePoint]:
    """Vertices of the lower convex envelope, by increasing M.

    For repeated M only the smallest R survives (the first one on ties).
    Collinear interior points are dropped.
    """
    best = {}
    for p in points:
        if p.M not in best or p.R < best[p.M].R:
            best[p.M] = p
    if not best:
        raise ValueError("lower_hull needs at least one point")
    hull: List[RatePoint] = []
    for p in sorted(best.values(), key=lambda q: q.M):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return hull


def hull_value(vertices: Sequence[RatePoint], M) -> Fraction:
    """Piecewise-linear envelope through ``vertices`` evaluated at M."""
    M = Fraction(M)
    if not vertices[0].M <= M <= vertices[-1].M:
        raise ValueError(f"M={M} outside hull range")
    for a, b in zip(vertices, vertices[1:]):
        if a.M <= M <= b.M:
            return a.R + (b.R - a.R) * (M - a.M) / (b.M - a.M)
    return vertices[0].R


def scheme_hull_vertices(K: int) -> List[RatePoint]:
    """Hull vertices contributed by the scheme with 0 < M < 1."""
    return [p for p in lower_hull(achievable_points(K))
            if p.source == "scheme" and 0 < p.M < 1]


def fmin_k10(m: int) -> int:
    """Minimum file size for memory sharing between (3/10) and (12/10) at K=10."""
    if not 4 <= m <= 9:
        raise ValueError(f"m={m} outside 4..9")
    a, b = 7 * (12 - m), m - 3
    g = gcd(a, b)
    return binom(10, 3) * a // g + binom(10, 6) * b // g


def fmin_interpolate(left: Tuple, right: Tuple, target_M) -> int:
    """Smallest file size for memory sharing between two scheme endpoints.

    ``left`` and ``right`` are ``(M, granularity)`` pairs, the granularity
    being the number of pieces the endpoint scheme splits a file into. The
    cache is split between the endpoints in the ratio
    (M_right - M) : (M - M_left); each endpoint's file part must then be a
    whole multiple of its granularity.
    """
    (m1, g1), (m2, g2) = left, right
    m1, m2, M = Fraction(m1), Fraction(m2), Fraction(target_M)
    if not m1 < M < m2:
        raise ValueError(f"target M={M} outside ({m1}, {m2})")
    # cache_1 / cache_2 = (m2 - M) / (M - m1), cache_i = m_i * size_i
    size_ratio = (m2 - M) / (M - m1) * m2 / m1
    # size_1 = g1 * l, size_2 = g2 * l'
    units = size_ratio * Fraction(g2, g1)
    return g1 * units.numerator + g2 * units.denominator
