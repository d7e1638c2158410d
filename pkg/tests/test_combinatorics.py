from itertools import combinations
from math import factorial

import pytest
from hypothesis import given, strategies as st

from codedcache.combinatorics import (
    MAX_N,
    RangeError,
    binom,
    colex_rank,
    enumerate_subsets,
    mask,
    rank,
    unrank,
)


def test_binom_examples():
    assert binom(6, 3) == 20
    assert binom(10, 6) == factorial(10) // (factorial(6) * factorial(4))
    assert binom(7, 9) == 0
    for n in range(0, 10):
        assert binom(n, 0) == 1


def test_binom_range():
    assert binom(64, 32) == 1832624140942590534
    with pytest.raises(RangeError):
        binom(65, 3)
    with pytest.raises(RangeError):
        binom(5, -1)


@given(st.integers(1, MAX_N), st.integers(1, MAX_N))
def test_pascal(n, k):
    assert binom(n, k) == binom(n - 1, k) + binom(n - 1, k - 1)


def test_enumerate_examples():
    assert enumerate_subsets(3, 2) == [(1, 2), (1, 3), (2, 3)]
    assert enumerate_subsets(4, 4) == [(1, 2, 3, 4)]
    assert len(enumerate_subsets(6, 3)) == 20
    assert enumerate_subsets(5, 0) == [()]


@pytest.mark.parametrize("n,k", [(n, k) for n in range(0, 9) for k in range(0, n + 1)])
def test_enumerate_is_colex(n, k):
    got = enumerate_subsets(n, k)
    # colex == sort by bitmask; independent of the generator
    expected = sorted(combinations(range(1, n + 1), k), key=mask)
    assert got == expected
    assert len(got) == binom(n, k)


def test_rank_examples():
    assert rank((1, 2), 3) == 0
    assert unrank(0, 3, 2) == (1, 2)
    assert rank((2, 3), 3) == 2
    for i, s in enumerate(enumerate_subsets(6, 3)):
        assert rank(s, 6) == i == colex_rank(s)
        assert unrank(rank(s, 6), 6, 3) == s


def test_rank_errors():
    with pytest.raises(RangeError):
        unrank(20, 6, 3)
    with pytest.raises(RangeError):
        rank((3, 2), 5)
    with pytest.raises(RangeError):
        rank((1, 7), 6)


@st.composite
def subsets(draw):
    n = draw(st.integers(1, 12))
    k = draw(st.integers(0, n))
    return n, tuple(sorted(draw(st.sets(st.integers(1, n), min_size=k, max_size=k))))


@given(subsets())
def test_round_trip(case):
    n, s = case
    assert unrank(rank(s, n), n, len(s)) == s


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))))
def test_unrank_rank(case):
    n, k = case
    for r in range(binom(n, k)):
        assert rank(unrank(r, n, k), n) == r
