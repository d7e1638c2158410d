"""Independent GF(2) decodability check.

Each row is an int bitmask over 2 * C(K, m) columns; column ``r`` is A_r and
column ``C + r`` is B_r, where r is the colex rank of the subfile index.
Rows may carry a right-hand side (the known XOR value as an int) so the
eliminator can also reconstruct payloads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from codedcache.combinatorics import Subset, colex_rank, unrank
from codedcache.delivery import DeliveryPlan
from codedcache.model import FileId, ProblemInstance
from codedcache.placement import cache_index_set


@dataclass
class LinearSystem:
    n_subfiles: int
    rows: List[int] = field(default_factory=list)
    tags: List[str] = field(default_factory=list)
    rhs: Optional[List[int]] = None

    @property
    def n_cols(self) -> int:
        return 2 * self.n_subfiles

    def column(self, f: FileId, r: int) -> int:
        return r if f is FileId.A else self.n_subfiles + r

    def add(self, row: int, tag: str, value: Optional[int] = None) -> None:
        self.rows.append(row)
        self.tags.append(tag)
        if self.rhs is not None:
            self.rhs.append(0 if value is None else value)


def _block_int(block: np.ndarray) -> int:
    return int.from_bytes(np.asarray(block, dtype=np.uint8).tobytes(), "big")


def build_user_system(inst: ProblemInstance, user: int, plan: DeliveryPlan,
                      fileA: Optional[np.ndarray] = None,
                      fileB: Optional[np.ndarray] = None) -> LinearSystem:
    """Cache equations and broadcast equations known to ``user``.

    With payloads given, each row also carries its XOR value.
    """
    C = inst.n_subfiles
    with_values = fileA is not None and fileB is not None
    sys = LinearSystem(C, rhs=[] if with_values else None)
    for s in cache_index_set(inst.K, inst.m, user):
        r = colex_rank(s)
        val = _block_int(fileA[r] ^ fileB[r]) if with_values else None
        sys.add((1 << r) | (1 << (C + r)), "cache-eq", val)
    for msg in plan.messages:
        row = 0
        val = 0
        for f, s in msg.terms:
            r = colex_rank(s)
            row ^= 1 << sys.column(f, r)
            if with_values:
                val ^= _block_int((fileA if f is FileId.A else fileB)[r])
        sys.add(row, "broadcast-eq", val if with_values else None)
    return sys


class _Basis:
    """Echelon basis keyed by each row's lowest set bit."""

    def __init__(self):
        self.rows: Dict[int, Tuple[int, int]] = {}

    def reduce(self, v: int, val: int = 0) -> Tuple[int, int]:
        rows = self.rows
        while v:
            low = v & -v
            hit = rows.get(low)
            if hit is None:
                return v, val
            v ^= hit[0]
            val ^= hit[1]
        return 0, val

    def insert(self, v: int, val: int = 0) -> bool:
        v, val = self.reduce(v, val)
        if not v:
            return False
        self.rows[v & -v] = (v, val)
        return True


    def copy(self) -> "_Basis":
        out = _Basis()
        out.rows = dict(self.rows)
        return out


def _basis(sys: LinearSystem) -> _Basis:
    basis = _Basis()
    rhs = sys.rhs if sys.rhs is not None else [0] * len(sys.rows)
    for row, val in zip(sys.rows, rhs):
        basis.insert(row, val)
    return basis


def rank(sys: LinearSystem) -> int:
    return len(_basis(sys).rows)


def decodable(sys: LinearSystem, want: FileId, K: Optional[int] = None,
              m: Optional[int] = None) -> Tuple[bool, Optional[object]]:
    """Whether every subfile of ``want`` lies in the row space.

    Returns ``(True, None)`` or ``(False, witness)``; the witness is the
    first missing subfile index (as a subset when K and m are given,
    otherwise its rank).
    """
    basis = _basis(sys)
    for r in range(sys.n_subfiles):
        residual, _ = basis.reduce(1 << sys.column(want, r))
        if residual:
            return False, (unrank(r, K, m) if K is not None else r)
    return True, None


def reconstruct(sys: LinearSystem, want: FileId, subfile_size: int) -> np.ndarray:
    """Solve the system for every subfile of ``want``; needs row values."""
    if sys.rhs is None:
        raise ValueError("system was built without payload values")
    basis = _basis(sys)
    out = np.zeros((sys.n_subfiles, subfile_size), dtype=np.uint8)
    for r in range(sys.n_subfiles):
        residual, val = basis.reduce(1 << sys.column(want, r))
        if residual:
            raise ValueError(f"subfile rank {r} of {want.value} not in row space")
        out[r] = np.frombuffer(val.to_bytes(subfile_size, "big"), dtype=np.uint8)
    return out


class PlanOracle:
    """Per-plan checker that eliminates the broadcast rows once.

    Each user's check extends a copy of the shared basis with that user's
    cache rows; results match :func:`build_user_system` + :func:`reconstruct`.
    """

    def __init__(self, inst: ProblemInstance, plan: DeliveryPlan,
                 fileA: np.ndarray, fileB: np.ndarray):
        self.inst, self.fileA, self.fileB = inst, fileA, fileB
        bare = LinearSystem(inst.n_subfiles, rhs=[])
        self.layout = bare
        self.shared = _Basis()
        files = {FileId.A: fileA, FileId.B: fileB}
        for msg in plan.messages:
            row = val = 0
            for f, s in msg.terms:
                r = colex_rank(s)
                row ^= 1 << bare.column(f, r)
                val ^= _block_int(files[f][r])
            self.shared.insert(row, val)

    def solve(self, user: int, want: FileId) -> Tuple[Optional[np.ndarray], Optional[Subset]]:
        """``(payload, None)`` when decodable, else ``(None, first missing index)``."""
        inst, C = self.inst, self.inst.n_subfiles
        basis = self.shared.copy()
        for s in cache_index_set(inst.K, inst.m, user):
            r = colex_rank(s)
            basis.insert((1 << r) | (1 << (C + r)), _block_int(self.fileA[r] ^ self.fileB[r]))
        out = np.zeros((C, inst.subfile_size), dtype=np.uint8)
        for r in range(C):
            residual, val = basis.reduce(1 << self.layout.column(want, r))
            if residual:
                return None, unrank(r, inst.K, inst.m)
            out[r] = np.frombuffer(val.to_bytes(inst.subfile_size, "big"), dtype=np.uint8)
        return out, None
