"""Indexing with a synchronization string and the K-round matching decoder."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ._rational import as_fraction
from .channel import CorruptionPattern, survivor_map
from .kernels import SymbolString, _lcs_pairs
from .sync import SyncString


@dataclass(frozen=True)
class IndexedString:
    payload: SymbolString
    index: SyncString

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.payload.symbols, self.index.symbols))

    @property
    def combined(self) -> SymbolString:
        return combine(self.payload, self.index.s)

    def __len__(self):
        return len(self.payload)


def index(payload: SymbolString, sync: SyncString) -> IndexedString:
    if len(payload) != len(sync):
        raise ValueError(f"payload length {len(payload)} != sync length {len(sync)}")
    return IndexedString(payload, sync)


def combine(payload: SymbolString, idx: SymbolString) -> SymbolString:
    """Pack (payload, index) pairs into one alphabet of size ``q_payload * q_index``."""
    if len(payload) != len(idx):
        raise ValueError("payload and index tracks differ in length")
    qi = idx.q
    return SymbolString(
        payload.q * qi, ((p - 1) * qi + g for p, g in zip(payload.symbols, idx.symbols))
    )


def split(received: SymbolString, q_index: int) -> tuple[SymbolString, SymbolString]:
    """Inverse of :func:`combine`: returns (payload track, index track)."""
    if received.q % q_index:
        raise ValueError(f"alphabet {received.q} is not a multiple of index alphabet {q_index}")
    q_payload = received.q // q_index
    payload = [(c - 1) // q_index + 1 for c in received.symbols]
    idx = [(c - 1) % q_index + 1 for c in received.symbols]
    return SymbolString(q_payload, payload), SymbolString(q_index, idx)


@dataclass(frozen=True)
class CandidateLists:
    """Per sent position, the received symbols the decoder placed there.

    Each entry is ``(received_position, payload_symbol)`` with 1-based
    received positions.  ``round_sizes`` records the size of every matching.
    """

    n: int
    lists: tuple[tuple[tuple[int, int], ...], ...]
    round_sizes: tuple[int, ...] = ()

    def __getitem__(self, i):
        return self.lists[i]

    def __len__(self):
        return self.n

    @property
    def total(self) -> int:
        return sum(len(a) for a in self.lists)

    @property
    def max_size(self) -> int:
        return max((len(a) for a in self.lists), default=0)

    def symbol_sets(self) -> list[set[int]]:
        return [{sym for _, sym in a} for a in self.lists]

    def to_json(self) -> str:
        return json.dumps([[list(c) for c in a] for a in self.lists])

    @classmethod
    def from_json(cls, text: str) -> "CandidateLists":
        data = json.loads(text)
        return cls(len(data), tuple(tuple((int(r), int(s)) for r, s in a) for a in data))


@dataclass(frozen=True)
class DecoderParams:
    K: int
    epsilon_prime: Fraction
    epsilon: Optional[Fraction] = None
    gamma: Optional[Fraction] = None

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")


def choose_params(epsilon, gamma) -> DecoderParams:
    """Round count ``ceil(2(1+gamma)/eps)`` and index parameter ``eps^2 / (4(1+gamma))``."""
    eps, gamma = as_fraction(epsilon), as_fraction(gamma)
    if not 0 < eps < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
    if gamma < 0:
        raise ValueError(f"gamma must be nonnegative, got {gamma}")
    K = math.ceil(2 * (1 + gamma) / eps)
    return DecoderParams(K, eps**2 / (4 * (1 + gamma)), eps, gamma)


def global_list_decode(
    sync: SyncString | SymbolString,
    received_index: Sequence[int] | SymbolString,
    received_payload: Sequence[int] | SymbolString,
    K: int,
) -> CandidateLists:
    """K rounds of maximum matching between the sync string and unmatched received indices.

    Received positions leave the pool once matched; sync positions stay
    available, which is how a list grows past one candidate.
    """
    ridx = tuple(received_index)
    rpay = tuple(received_payload)
    if len(ridx) != len(rpay):
        raise ValueError("received index and payload tracks differ in length")
    if K < 1:
        raise ValueError("K must be >= 1")
    s = tuple(sync.symbols)
    lists: list[list[tuple[int, int]]] = [[] for _ in s]
    pool = list(range(len(ridx)))
    sizes = []
    for _ in range(K):
        pairs = _lcs_pairs(s, [ridx[t] for t in pool])
        sizes.append(len(pairs))
        if not pairs:
            continue
        taken = set()
        for a, b in pairs:
            r = pool[b]
            lists[a].append((r + 1, rpay[r]))
            taken.add(b)
        pool = [t for pos, t in enumerate(pool) if pos not in taken]
    return CandidateLists(len(s), tuple(tuple(a) for a in lists), tuple(sizes))


@dataclass(frozen=True)
class HitStats:
    hit_count: int
    value_hit_count: int
    unmatched: int
    mismatched: int
    deleted: int
    max_list: int
    avg_list: Fraction


def hit_statistics(lists: CandidateLists, truth: CorruptionPattern, sent: IndexedString | SymbolString) -> HitStats:
    """Score candidate lists against the channel's actual script.

    ``hit_count`` requires the exact surviving copy of position ``i`` in
    ``A_i``; ``value_hit_count`` only asks for the right payload symbol.
    Surviving positions that miss are split into never-matched and matched
    elsewhere.
    """
    payload = sent.payload if isinstance(sent, IndexedString) else sent
    n = lists.n
    if truth.n != n or len(payload) != n:
        raise ValueError("lists, pattern and sent string disagree on n")
    survivors = survivor_map(truth)
    placed: dict[int, int] = {}
    for i, cands in enumerate(lists.lists, start=1):
        for r, _ in cands:
            placed[r] = i
    hits = value_hits = unmatched = mismatched = 0
    for i in range(1, n + 1):
        if any(sym == payload[i - 1] for _, sym in lists.lists[i - 1]):
            value_hits += 1
        r = survivors.get(i)
        if r is None:
            continue
        where = placed.get(r)
        if where == i:
            hits += 1
        elif where is None:
            unmatched += 1
        else:
            mismatched += 1
    avg = Fraction(lists.total, n) if n else Fraction(0)
    return HitStats(hits, value_hits, unmatched, mismatched, n - len(survivors), lists.max_size, avg)
