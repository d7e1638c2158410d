"""Problem parameters, demands, payloads and broadcast messages."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Sequence, Tuple

import numpy as np

from codedcache.combinatorics import MAX_N, Subset, binom

DEFAULT_SEED = 20160101
DEFAULT_SUBFILE_SIZE = 1


class FileId(enum.Enum):
    A = "A"
    B = "B"

    def other(self) -> "FileId":
        return FileId.B if self is FileId.A else FileId.A


@dataclass(frozen=True)
class ProblemInstance:
    K: int
    m: int
    subfile_size: int = DEFAULT_SUBFILE_SIZE

    def __post_init__(self):
        if not 2 <= self.K <= MAX_N:
            raise ValueError(f"K must lie in 2..{MAX_N}, got {self.K}")
        if not 1 <= self.m <= self.K - 1:
            raise ValueError(f"m must lie in 1..K-1, got m={self.m}, K={self.K}")
        if self.subfile_size < 1:
            raise ValueError("subfile_size must be positive")

    @property
    def M(self) -> Fraction:
        return Fraction(self.m, self.K)

    @property
    def n_subfiles(self) -> int:
        return binom(self.K, self.m)


@dataclass(frozen=True)
class Demand:
    requests: Tuple[FileId, ...]

    @classmethod
    def parse(cls, text: str) -> "Demand":
        """Parse a string such as ``"AABBBB"``."""
        text = text.strip().upper()
        if not text or set(text) - {"A", "B"}:
            raise ValueError(f"demand string must be over {{A,B}}, got {text!r}")
        return cls(tuple(FileId(c) for c in text))

    def __str__(self) -> str:
        return "".join(f.value for f in self.requests)

    def __len__(self) -> int:
        return len(self.requests)

    def check(self, K: int) -> None:
        if len(self.requests) != K:
            raise ValueError(f"demand has length {len(self.requests)}, expected K={K}")


def canonicalize_demand(d: Demand) -> Tuple[Tuple[int, ...], int]:
    """Stable partition of users into A-requesters then B-requesters.

    Returns ``(order, L)`` where ``order[p - 1]`` is the original user placed
    at canonical position ``p`` and ``L`` counts the A-requesters. For
    ``BABA`` this gives ``((2, 4, 1, 3), 2)``.
    """
    users = range(1, len(d.requests) + 1)
    a_side = [u for u in users if d.requests[u - 1] is FileId.A]
    b_side = [u for u in users if d.requests[u - 1] is FileId.B]
    return tuple(a_side + b_side), len(a_side)


def random_payload(inst: ProblemInstance, rng: np.random.Generator) -> np.ndarray:
    """One file as a ``(n_subfiles, subfile_size)`` uint8 array; row r holds subfile ``unrank(r)``."""
    return rng.integers(0, 256, size=(inst.n_subfiles, inst.subfile_size), dtype=np.uint8)


def check_payload(inst: ProblemInstance, payload: np.ndarray) -> None:
    if payload.shape != (inst.n_subfiles, inst.subfile_size):
        raise ValueError(
            f"payload shape {payload.shape} does not match "
            f"({inst.n_subfiles}, {inst.subfile_size})"
        )


@dataclass(frozen=True)
class BroadcastMessage:
    """XOR of the subfiles named in ``terms``.

    ``T`` and ``S`` record the index pair that generated the message, in the
    same labels as ``terms``; for singletons ``T ∪ S`` is the subfile index.
    """

    terms: FrozenSet[Tuple[FileId, Subset]]
    step: int
    T: Subset = ()
    S: Subset = ()

    @classmethod
    def combine(cls, terms: Sequence[Tuple[FileId, Subset]], step: int, T=(), S=()):
        # GF(2): a repeated term cancels
        acc: set = set()
        for t in terms:
            acc ^= {t}
        if not acc:
            raise ValueError("message with no surviving terms")
        return cls(frozenset(acc), step, tuple(T), tuple(S))

    def label(self) -> str:
        parts = sorted(self.terms, key=lambda t: (t[0].value, t[1]))
        return "+".join(f"{f.value}{''.join(map(str, s))}" if max(s, default=0) < 10
                        else f"{f.value}{{{','.join(map(str, s))}}}" for f, s in parts)


@dataclass
class CacheContent:
    """Blocks ``A_T xor B_T`` for all T containing ``user``, rows keyed by subset rank."""

    user: int
    ranks: Tuple[int, ...]
    blocks: np.ndarray
    _row: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._row = {r: i for i, r in enumerate(self.ranks)}

    def __len__(self) -> int:
        return len(self.ranks)

    def __contains__(self, r: int) -> bool:
        return r in self._row

    def block(self, r: int) -> np.ndarray:
        return self.blocks[self._row[r]]
