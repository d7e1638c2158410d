"""Coded placement: user l caches A_T xor B_T for every m-subset T containing l."""

from __future__ import annotations

from typing import List

import numpy as np

from codedcache.combinatorics import Subset, enumerate_subsets, rank
from codedcache.model import CacheContent, ProblemInstance, check_payload


def cache_index_set(K: int, m: int, user: int) -> List[Subset]:
    if not 1 <= user <= K:
        raise ValueError(f"user {user} outside 1..{K}")
    if not 1 <= m <= K - 1:
        raise ValueError(f"m={m} outside 1..K-1")
    return [s for s in enumerate_subsets(K, m) if user in s]


def build_caches(inst: ProblemInstance, fileA: np.ndarray, fileB: np.ndarray) -> List[CacheContent]:
    check_payload(inst, fileA)
    check_payload(inst, fileB)
    coded = np.bitwise_xor(fileA, fileB)
    caches = []
    for user in range(1, inst.K + 1):
        ranks = tuple(rank(s, inst.K) for s in cache_index_set(inst.K, inst.m, user))
        blocks = coded[list(ranks)].copy()
        blocks.setflags(write=False)
        caches.append(CacheContent(user, ranks, blocks))
    return caches
