"""Sweeping property checks shared by ``codedcache verify`` and the tests.

Each check returns a :class:`CheckResult`; a failure carries the first
counterexample found.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from codedcache.combinatorics import binom
from codedcache.delivery import (
    decode_user,
    evaluate_plan,
    generate_messages,
    j_window,
    optimal_j,
)
from codedcache.model import (
    DEFAULT_SEED,
    Demand,
    FileId,
    ProblemInstance,
    canonicalize_demand,
    random_payload,
)
from codedcache.oracle import PlanOracle
from codedcache.placement import build_caches
from codedcache.rates import (
    achievable_points,
    cutset_lower_bound,
    hull_value,
    lower_hull,
    mn_rate,
    rate,
    rate_L,
    rate_with_j,
    step3_count,
    step4_count,
)


@dataclass
class CheckResult:
    name: str
    ok: bool
    cases: int
    counterexample: Optional[str] = None

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        tail = f"  counterexample: {self.counterexample}" if self.counterexample else ""
        return f"[{status}] {self.name} ({self.cases} cases){tail}"


def check_message_families(K_max: int) -> CheckResult:
    """Steps 1+2 partition the subfiles; steps 3/4 match the closed-form counts."""
    cases = 0
    for K in range(2, K_max + 1):
        for m in range(1, K):
            inst = ProblemInstance(K, m)
            C = binom(K, m)
            for L in range(1, K):
                lo, hi = j_window(K, m, L)
                for j in range(lo, hi + 1):
                    cases += 1
                    plan = generate_messages(inst, L, j)
                    singles = [next(iter(msg.terms))[1] for msg in plan.messages if msg.step <= 2]
                    n1, n2, n3, n4 = plan.step_counts
                    where = f"K={K} m={m} L={L} j={j}"
                    if len(singles) != C or len(set(singles)) != C:
                        return CheckResult("message-families", False, cases, f"{where}: singletons")
                    if n3 != step3_count(K, m, L, j) or n4 != step4_count(K, m, L, j):
                        return CheckResult("message-families", False, cases,
                                           f"{where}: counts {n3},{n4}")
    return CheckResult("message-families", True, cases)


def check_prop1(K_max: int) -> CheckResult:
    """ceil(m(1 - L/K)) minimizes the rate over the threshold window."""
    cases = 0
    for K in range(2, K_max + 1):
        for m in range(1, K):
            for L in range(1, K):
                cases += 1
                lo, hi = j_window(K, m, L)
                js = optimal_j(K, m, L)
                if not lo <= js <= hi:
                    return CheckResult("optimal-threshold", False, cases,
                                       f"K={K} m={m} L={L}: j*={js} outside [{lo},{hi}]")
                best = rate_with_j(K, m, L, js)
                for j in range(lo, hi + 1):
                    if rate_with_j(K, m, L, j) < best:
                        return CheckResult("optimal-threshold", False, cases,
                                           f"K={K} m={m} L={L}: j={j} beats j*={js}")
    return CheckResult("optimal-threshold", True, cases)


def check_prop2(K_max: int) -> CheckResult:
    """Scheme rate beats the baseline on M = 2t/K < 1, ties only at odd K, M=(K-1)/K."""
    cases = 0
    for K in range(2, K_max + 1):
        for t in range(1, -(-K // 2)):
            cases += 1
            M = Fraction(2 * t, K)
            ours, base = rate(K, 2 * t), mn_rate(K, M)
            if K % 2 == 1 and 2 * t == K - 1:
                ok = ours == base == 1
            else:
                ok = ours < base
            if not ok:
                return CheckResult("beats-baseline", False, cases,
                                   f"K={K} M={M}: scheme {ours} vs baseline {base}")
    return CheckResult("beats-baseline", True, cases)


def check_rate_bounds(K_max: int) -> CheckResult:
    """rate >= 1 and the cut-set bound lies below every achievable point."""
    cases = 0
    for K in range(2, K_max + 1):
        for m in range(1, K):
            cases += 1
            M = Fraction(m, K)
            r = rate(K, m)
            if r < 1 or cutset_lower_bound(K, M) > r:
                return CheckResult("rate-bounds", False, cases, f"K={K} m={m}: {r}")
        for t in range(0, K + 1):
            cases += 1
            M = Fraction(2 * t, K)
            if cutset_lower_bound(K, M) > mn_rate(K, M):
                return CheckResult("rate-bounds", False, cases, f"K={K} baseline M={M}")
    return CheckResult("rate-bounds", True, cases)


def check_hull(K_max: int) -> CheckResult:
    """Every achievable point lies on or above the memory-sharing envelope."""
    cases = 0
    for K in range(2, K_max + 1):
        pts = achievable_points(K)
        hull = lower_hull(pts)
        for p in pts:
            cases += 1
            if p.R < hull_value(hull, p.M):
                return CheckResult("hull-validity", False, cases, f"K={K} point {p}")
    return CheckResult("hull-validity", True, cases)


def run_demand(inst: ProblemInstance, d: Demand, seed: int = DEFAULT_SEED,
               oracle: bool = True) -> Optional[str]:
    """Full pipeline for one demand with every cross-check; None when all agree."""
    K, m = inst.K, inst.m
    rng = np.random.default_rng(seed)
    files = {FileId.A: random_payload(inst, rng), FileId.B: random_payload(inst, rng)}
    fileA, fileB = files[FileId.A], files[FileId.B]
    order, L = canonicalize_demand(d)
    j = optimal_j(K, m, L) if 0 < L < K else 0
    plan = generate_messages(inst, L, j, order)
    caches = build_caches(inst, fileA, fileB)
    received = evaluate_plan(plan, fileA, fileB)
    where = f"K={K} m={m} demand={d}"

    got_rate = Fraction(len(plan.messages), inst.n_subfiles)
    want_rate = rate_L(K, m, L) if 0 < L < K else Fraction(1)
    if got_rate != want_rate:
        return f"{where}: simulated rate {got_rate} != formula {want_rate}"

    checker = PlanOracle(inst, plan, fileA, fileB) if oracle else None
    for user in range(1, K + 1):
        want = d.requests[user - 1]
        try:
            got = decode_user(user, want, caches[user - 1], plan, received)
        except Exception as exc:  # surfaced as a counterexample
            return f"{where}: {exc}"
        if not np.array_equal(got, files[want]):
            return f"{where}: user {user} decoded wrong bytes"
        if checker is not None:
            solved, witness = checker.solve(user, want)
            if solved is None:
                return f"{where}: oracle says user {user} misses {witness}"
            if not np.array_equal(solved, got):
                return f"{where}: oracle reconstruction differs for user {user}"
    return None


def demands_for(K: int, exhaustive_max: int, samples: int, rng: random.Random) -> Iterator[Demand]:
    if K <= exhaustive_max:
        for p in itertools.product((FileId.A, FileId.B), repeat=K):
            yield Demand(p)
    else:
        for _ in range(samples):
            yield Demand(tuple(rng.choice((FileId.A, FileId.B)) for _ in range(K)))


def check_decoding(K_max: int, exhaustive_max: int = 7, samples: int = 200,
                   oracle_max: int = 9, seed: int = DEFAULT_SEED) -> CheckResult:
    """Bit-exact decoding, rate identity and oracle agreement over demand patterns.

    Also reruns a random relabelling of each sampled demand and requires the
    same rate and success.
    """
    rng = random.Random(seed)
    cases = 0
    for K in range(2, K_max + 1):
        for m in range(1, K):
            inst = ProblemInstance(K, m)
            for d in demands_for(K, exhaustive_max, samples, rng):
                cases += 1
                err = run_demand(inst, d, seed + cases, oracle=K <= oracle_max)
                if err:
                    return CheckResult("decoding", False, cases, err)
                shuffled = list(d.requests)
                rng.shuffle(shuffled)
                d2 = Demand(tuple(shuffled))
                err = run_demand(inst, d2, seed + cases, oracle=False)
                if err:
                    return CheckResult("decoding", False, cases, f"relabelled: {err}")
    return CheckResult("decoding", True, cases)
