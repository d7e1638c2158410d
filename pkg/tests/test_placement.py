from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from codedcache.combinatorics import binom, enumerate_subsets, rank
from codedcache.model import ProblemInstance, random_payload
from codedcache.placement import build_caches, cache_index_set


def test_cache_index_set_examples():
    idx = cache_index_set(6, 3, 1)
    # colex order: {1,2,5} comes after {1,3,4}
    assert idx[:4] == [(1, 2, 3), (1, 2, 4), (1, 3, 4), (1, 2, 5)]
    assert len(idx) == 10
    assert cache_index_set(2, 1, 2) == [(2,)]
    assert len(cache_index_set(10, 3, 7)) == binom(9, 2) == 36


def test_user1_table():
    # users 1, 3 and 6 as listed in the K=6 cache table
    assert sorted(cache_index_set(6, 3, 1)) == [
        (1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 2, 6), (1, 3, 4), (1, 3, 5), (1, 3, 6),
        (1, 4, 5), (1, 4, 6), (1, 5, 6)]
    assert (1, 3, 4) in cache_index_set(6, 3, 3) and (3, 5, 6) in cache_index_set(6, 3, 3)
    assert (1, 4, 6) in cache_index_set(6, 3, 6) and (4, 5, 6) in cache_index_set(6, 3, 6)


def test_bad_user():
    with pytest.raises(ValueError):
        cache_index_set(6, 3, 7)


def test_cache_size_k6():
    inst = ProblemInstance(6, 3)
    rng = np.random.default_rng(0)
    caches = build_caches(inst, random_payload(inst, rng), random_payload(inst, rng))
    for c in caches:
        assert len(c) == 10
        assert Fraction(len(c), inst.n_subfiles) == Fraction(1, 2)


def test_equal_files_give_zero_cache():
    inst = ProblemInstance(5, 2, subfile_size=4)
    f = random_payload(inst, np.random.default_rng(3))
    for c in build_caches(inst, f, f.copy()):
        assert not c.blocks.any()


def test_blocks_are_xors():
    inst = ProblemInstance(4, 2, subfile_size=3)
    rng = np.random.default_rng(11)
    fa, fb = random_payload(inst, rng), random_payload(inst, rng)
    for c in build_caches(inst, fa, fb):
        for s in enumerate_subsets(4, 2):
            r = rank(s, 4)
            if c.user in s:
                assert bytes(c.block(r)) == bytes(a ^ b for a, b in zip(fa[r], fb[r]))
            else:
                assert r not in c


def test_shape_mismatch():
    inst = ProblemInstance(4, 2)
    with pytest.raises(ValueError):
        build_caches(inst, np.zeros((5, 1), np.uint8), np.zeros((6, 1), np.uint8))


@given(st.integers(2, 12).flatmap(lambda K: st.tuples(st.just(K), st.integers(1, K - 1))))
def test_cache_fraction_and_cover(case):
    K, m = case
    counts = {}
    for user in range(1, K + 1):
        idx = cache_index_set(K, m, user)
        assert len(idx) == binom(K - 1, m - 1)
        assert Fraction(len(idx), binom(K, m)) == Fraction(m, K)
        for s in idx:
            assert user in s
            counts[s] = counts.get(s, 0) + 1
    assert len(counts) == binom(K, m)
    assert set(counts.values()) == {m}


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_swap_symmetry(seed):
    inst = ProblemInstance(5, 2, subfile_size=2)
    rng = np.random.default_rng(seed)
    fa, fb = random_payload(inst, rng), random_payload(inst, rng)
    for c1, c2 in zip(build_caches(inst, fa, fb), build_caches(inst, fb, fa)):
        assert np.array_equal(c1.blocks, c2.blocks)
