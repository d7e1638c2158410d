"""Delivery phase: message generation, evaluation, per-user decoding.

All generation and decoding happens in the canonical labelling where users
1..L want A and L+1..K want B. ``DeliveryPlan.order`` maps canonical
positions back to the original users, and every emitted message is written
in original labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from codedcache.combinatorics import Subset, binom, colex_rank, enumerate_subsets, mask
from codedcache.model import (
    DEFAULT_SEED,
    BroadcastMessage,
    CacheContent,
    Demand,
    FileId,
    ProblemInstance,
    canonicalize_demand,
    random_payload,
)
from codedcache.placement import build_caches

A, B = FileId.A, FileId.B


class DecodeError(RuntimeError):
    """A user could not resolve one of its wanted subfiles."""

    def __init__(self, user: int, want: FileId, subfile: Subset, reason: str = ""):
        self.user, self.want, self.subfile = user, want, subfile
        msg = f"user {user} cannot decode {want.value}{list(subfile)}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


def optimal_j(K: int, m: int, L: int) -> int:
    """Threshold ceil(m (K - L) / K) minimizing the delivery rate for split L."""
    if not 1 <= L <= K - 1:
        raise ValueError(f"L={L} outside 1..K-1")
    return -(-m * (K - L) // K)


def j_window(K: int, m: int, L: int) -> Tuple[int, int]:
    """Inclusive range of thresholds worth considering for split L."""
    return max(0, m - L + 1), min(K - L, m + 1)


@dataclass
class DeliveryPlan:
    K: int
    m: int
    L: int
    j: int
    order: Tuple[int, ...]
    messages: List[BroadcastMessage]
    _lookup: Dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._position = {u: p for p, u in enumerate(self.order, start=1)}
        self._rank_cache: Dict[Subset, int] = {}
        # keyed in canonical labels so decoding never maps back
        for i, msg in enumerate(self.messages):
            if msg.step in (1, 2):
                (f, s), = msg.terms
                self._lookup[(msg.step, self.to_canonical(s))] = i
            else:
                self._lookup[(msg.step, self.to_canonical(msg.T), self.to_canonical(msg.S))] = i

    @property
    def step_counts(self) -> Tuple[int, int, int, int]:
        counts = [0, 0, 0, 0]
        for msg in self.messages:
            counts[msg.step - 1] += 1
        return tuple(counts)

    def position(self, user: int) -> int:
        """Canonical position of an original user."""
        return self._position[user]

    def to_original(self, s: Sequence[int]) -> Subset:
        return tuple(sorted(self.order[x - 1] for x in s))

    def to_canonical(self, s: Sequence[int]) -> Subset:
        return tuple(sorted(self._position[x] for x in s))

    def original_rank(self, u: Subset) -> int:
        """Colex rank, in original labels, of the canonical index ``u``."""
        r = self._rank_cache.get(u)
        if r is None:
            r = self._rank_cache[u] = colex_rank(self.to_original(u))
        return r

    def find(self, step: int, T: Sequence[int] = (), S: Sequence[int] = ()) -> Optional[int]:
        """Index of the message with canonical key (step, T, S), or None.

        For singleton steps 1 and 2 the key is the index ``T ∪ S``.
        """
        if step in (1, 2):
            return self._lookup.get((step, tuple(sorted(tuple(T) + tuple(S)))))
        return self._lookup.get((step, tuple(T), tuple(S)))


def _split_key(T: Subset, S: Subset) -> Tuple[int, int]:
    return mask(S), mask(T)


def _canonical_messages(K: int, m: int, L: int, j: int) -> List[Tuple[int, list, Subset, Subset]]:
    """(step, terms, T, S) in canonical labels, ordered by step then colex (S, T)."""
    if L in (0, K):
        f = A if L == K else B
        return [(1 if f is A else 2, [(f, u)], (), ()) for u in enumerate_subsets(K, m)]

    a_users = range(1, L + 1)
    b_users = range(L + 1, K + 1)
    step1, step2, step3, step4 = [], [], [], []

    for u in enumerate_subsets(K, m):
        T = tuple(x for x in u if x <= L)
        S = tuple(x for x in u if x > L)
        if len(S) >= j:
            step1.append((_split_key(T, S), (1, [(A, u)], T, S)))
        else:
            step2.append((_split_key(T, S), (2, [(B, u)], T, S)))

    for s in range(0, min(j - 1, K - L) + 1):
        t_size = m - s
        if t_size < 0 or t_size > L - 1:
            continue
        for S in combinations(b_users, s):
            for T in combinations(range(2, L + 1), t_size):
                terms = [(A, tuple(sorted(T + S)))]
                for t in T:
                    T2 = tuple(sorted((set(T) | {1}) - {t}))
                    terms.append((A, tuple(sorted(T2 + S))))
                step3.append((_split_key(T, S), (3, terms, T, S)))

    for s in range(j, min(m, K - L - 1) + 1):
        t_size = m - s
        if t_size < 0 or t_size > L:
            continue
        for S in combinations(range(L + 2, K + 1), s):
            for T in combinations(a_users, t_size):
                terms = [(B, tuple(sorted(T + S)))]
                for x in S:
                    S2 = tuple(sorted((set(S) | {L + 1}) - {x}))
                    terms.append((B, tuple(sorted(T + S2))))
                step4.append((_split_key(T, S), (4, terms, T, S)))

    out = []
    for fam in (step1, step2, step3, step4):
        fam.sort(key=lambda kv: kv[0])
        out.extend(v for _, v in fam)
    return out


def generate_messages(inst: ProblemInstance, L: int, j: int = 0,
                      order: Optional[Sequence[int]] = None) -> DeliveryPlan:
    """Four-step delivery plan for ``L`` A-requesters and threshold ``j``.

    ``order`` lists the original users in canonical order (see
    :func:`codedcache.model.canonicalize_demand`); identity by default.
    """
    K, m = inst.K, inst.m
    if not 0 <= L <= K:
        raise ValueError(f"L={L} outside 0..{K}")
    if 0 < L < K:
        lo, hi = j_window(K, m, L)
        if not lo <= j <= hi:
            raise ValueError(f"j={j} outside window [{lo}, {hi}] for K={K}, m={m}, L={L}")
    order = tuple(range(1, K + 1)) if order is None else tuple(order)
    if sorted(order) != list(range(1, K + 1)):
        raise ValueError(f"order {order} is not a permutation of 1..{K}")

    def orig(s):
        return tuple(sorted(order[x - 1] for x in s))

    messages = []
    for step, terms, T, S in _canonical_messages(K, m, L, j):
        mapped = [(f, orig(u)) for f, u in terms]
        messages.append(BroadcastMessage.combine(mapped, step, orig(T), orig(S)))
    return DeliveryPlan(K, m, L, j, order, messages)


def evaluate_message(msg: BroadcastMessage, fileA: np.ndarray, fileB: np.ndarray) -> np.ndarray:
    """Bytewise XOR of the subfiles named by ``msg``."""
    files = {A: fileA, B: fileB}
    out = np.zeros(fileA.shape[1], dtype=np.uint8)
    for f, s in msg.terms:
        out ^= files[f][colex_rank(s)]
    return out


def evaluate_plan(plan: DeliveryPlan, fileA: np.ndarray, fileB: np.ndarray) -> List[np.ndarray]:
    return [evaluate_message(msg, fileA, fileB) for msg in plan.messages]


class _UserDecoder:
    """Recovery paths for one user, worked in canonical labels.

    For an A-requester the "own" part of an index U is U ∩ {1..L}, the pivot
    is user 1 and the chains are step-3 messages. A B-requester mirrors this
    with U ∩ {L+1..K}, pivot L+1 and step-4 messages.
    """

    def __init__(self, user, want, cache, plan, received):
        self.user, self.want = user, want
        self.cache, self.plan, self.received = cache, plan, received
        self.L = plan.L
        self.pos = plan.position(user)
        if want is A:
            self.in_own = lambda x: x <= self.L
            self.pivot = 1
            self.chain_step = 3
        else:
            self.in_own = lambda x: x > self.L
            self.pivot = self.L + 1
            self.chain_step = 4

    def _fail(self, u, reason):
        raise DecodeError(self.user, self.want, self.plan.to_original(u), reason)

    def _msg(self, step, T, S, u):
        i = self.plan.find(step, T, S)
        if i is None:
            self._fail(u, f"missing step-{step} message T={list(T)} S={list(S)}")
        return i

    def _chain(self, own, rest, u):
        """Received block of the chain message keyed by its own/rest split."""
        if self.want is A:
            return self.received[self._msg(3, own, rest, u)]
        return self.received[self._msg(4, rest, own, u)]

    def _direct(self, u):
        # (i) wanted subfile sent uncoded; (ii) other file's subfile sent and cached XOR held
        i = self.plan.find(1 if self.want is A else 2, u)
        if i is not None:
            return self.received[i]
        if self.pos in u:
            i = self.plan.find(2 if self.want is A else 1, u)
            if i is not None:
                return self.received[i] ^ self.cache.block(self.plan.original_rank(u))
        return None

    def _known(self, u):
        val = self._direct(u)
        if val is None:
            self._fail(u, "side term not available from singletons and cache")
        return val

    def subfile(self, u: Subset) -> np.ndarray:
        val = self._direct(u)
        if val is not None:
            return val
        own = tuple(x for x in u if self.in_own(x))
        rest = tuple(x for x in u if not self.in_own(x))
        ell, pivot = self.pos, self.pivot

        def with_own(o):
            return tuple(sorted(o + rest))

        if ell == pivot:
            # (iii) chain message anchored at this user
            acc = self._chain(own, rest, u).copy()
            for t in own:
                acc ^= self._known(with_own(tuple(sorted((set(own) | {pivot}) - {t}))))
            return acc
        if pivot in own:
            # (iii) chain anchored at ell with the pivot swapped out
            own2 = tuple(sorted((set(own) | {ell}) - {pivot}))
            acc = self._chain(own2, rest, u).copy()
            for t in own2:
                if t == ell:
                    continue
                acc ^= self._known(with_own(tuple(sorted((set(own2) | {pivot}) - {t}))))
            acc ^= self._known(with_own(own2))
            return acc
        # (iv) sum of chains; every leftover term contains ell
        acc = self._chain(own, rest, u).copy()
        for t in own:
            acc ^= self._chain(tuple(sorted((set(own) | {ell}) - {t})), rest, u)
        for t in own:
            acc ^= self._known(with_own(tuple(sorted((set(own) | {ell}) - {t}))))
        return acc


def decode_user(user: int, want: FileId, cache: CacheContent, plan: DeliveryPlan,
                received: Sequence[np.ndarray]) -> np.ndarray:
    """Reconstruct the file ``want`` for ``user`` from its cache and the broadcast.

    Raises :class:`DecodeError` naming the first subfile that cannot be resolved.
    """
    if cache.user != user:
        raise ValueError(f"cache belongs to user {cache.user}, not {user}")
    dec = _UserDecoder(user, want, cache, plan, received)
    K, m = plan.K, plan.m
    size = len(received[0]) if len(received) else cache.blocks.shape[1]
    out = np.zeros((binom(K, m), size), dtype=np.uint8)
    for u in enumerate_subsets(K, m):
        out[plan.original_rank(u)] = dec.subfile(u)
    return out


@dataclass
class SimulationReport:
    K: int
    m: int
    demand: str
    L: int
    j: int
    step_counts: Tuple[int, int, int, int]
    n_messages: int
    transmitted_bytes: int
    rate: Fraction
    success: Tuple[bool, ...]
    plan: DeliveryPlan = field(repr=False)

    @property
    def all_ok(self) -> bool:
        return all(self.success)


def simulate(inst: ProblemInstance, d: Demand, seed: int = DEFAULT_SEED) -> SimulationReport:
    """Place, deliver and decode one demand on seeded random payloads."""
    d.check(inst.K)
    rng = np.random.default_rng(seed)
    fileA = random_payload(inst, rng)
    fileB = random_payload(inst, rng)
    order, L = canonicalize_demand(d)
    j = optimal_j(inst.K, inst.m, L) if 0 < L < inst.K else 0
    plan = generate_messages(inst, L, j, order)
    caches = build_caches(inst, fileA, fileB)
    received = evaluate_plan(plan, fileA, fileB)
    files = {A: fileA, B: fileB}

    success = []
    for user in range(1, inst.K + 1):
        want = d.requests[user - 1]
        got = decode_user(user, want, caches[user - 1], plan, received)
        success.append(bool(np.array_equal(got, files[want])))

    n = len(plan.messages)
    return SimulationReport(
        K=inst.K, m=inst.m, demand=str(d), L=L, j=j,
        step_counts=plan.step_counts, n_messages=n,
        transmitted_bytes=n * inst.subfile_size,
        rate=Fraction(n, inst.n_subfiles),
        success=tuple(success), plan=plan,
    )
