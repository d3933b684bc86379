"""Outer list-recoverable codes and the composed insertion/deletion codec.

The outer code is Reed-Solomon, list-recovered by enumerating every message.
That keeps recovery exact (it *is* the definition) at the price of a hard cap
on ``q**k``.  Codeword symbols are field elements ``0..q-1``; as a
:class:`SymbolString` they are shifted to ``1..q``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from ._rational import as_fraction
from .channel import CorruptionPattern
from .decoder import DecoderParams, choose_params, combine, global_list_decode, split
from .gf import GF, field
from .kernels import SymbolString
from .sync import SyncConstructionConfig, SyncString, construct_sync

ENUMERATION_CAP = 2**20


class ListRecoveryError(RuntimeError):
    pass


class EnumerationCapError(ListRecoveryError):
    pass


class ListSizeExceededError(ListRecoveryError):
    def __init__(self, found: int, cap: int):
        super().__init__(f"{found} messages pass the agreement threshold, cap is {cap}")
        self.found, self.cap = found, cap


class RSCode:
    """Reed-Solomon code evaluating degree < k polynomials at field elements 0..n-1."""

    def __init__(self, q: int, n: int, k: int, enumeration_cap: int = ENUMERATION_CAP):
        if not 1 <= k <= n <= q:
            raise ValueError(f"need 1 <= k <= n <= q, got q={q} n={n} k={k}")
        self.field: GF = field(q)
        self.q, self.n, self.k = q, n, k
        self.points = tuple(range(n))
        self.enumeration_cap = enumeration_cap
        self._codebook: Optional[np.ndarray] = None

    def __repr__(self):
        return f"RSCode(q={self.q}, n={self.n}, k={self.k})"

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    @property
    def size(self) -> int:
        return self.q**self.k

    def encode(self, msg: Sequence[int]) -> tuple[int, ...]:
        if len(msg) != self.k:
            raise ValueError(f"message must have {self.k} symbols, got {len(msg)}")
        if any(not 0 <= c < self.q for c in msg):
            raise ValueError(f"message symbols must be field elements 0..{self.q - 1}")
        F = self.field
        out = []
        for x in self.points:
            acc = 0
            for c in reversed(msg):
                acc = F.add(F.mul(acc, x), c)
            out.append(acc)
        return tuple(out)

    def message_at(self, index: int) -> tuple[int, ...]:
        """Message number ``index`` in enumeration order (first coefficient varies slowest)."""
        digits = []
        for _ in range(self.k):
            digits.append(index % self.q)
            index //= self.q
        return tuple(reversed(digits))

    def codebook(self) -> np.ndarray:
        """All codewords, one row per message in enumeration order."""
        if self._codebook is None:
            if self.size > self.enumeration_cap:
                raise EnumerationCapError(
                    f"q^k = {self.size} exceeds the enumeration cap {self.enumeration_cap}"
                )
            idx = np.arange(self.size)
            coeffs = [(idx // self.q ** (self.k - 1 - j)) % self.q for j in range(self.k)]
            add, mul = self.field.add_table, self.field.mul_table
            rows = np.zeros((self.size, self.n), dtype=np.int64)
            for col, x in enumerate(self.points):
                acc = np.zeros(self.size, dtype=np.int64)
                for c in reversed(coeffs):
                    acc = add[mul[acc, x], c]
                rows[:, col] = acc
            self._codebook = rows
        return self._codebook


def rs_encode(code: RSCode, msg: Sequence[int]) -> SymbolString:
    return SymbolString(code.q, (c + 1 for c in code.encode(msg)))


def _threshold_ok(agree: int, alpha: Fraction, n: int) -> bool:
    return agree >= alpha * n


def brute_force_list_recover(
    code: RSCode,
    lists: Sequence[Iterable[int]],
    alpha,
    L_cap: int,
) -> set[tuple[int, ...]]:
    """Every message whose codeword hits at least ``alpha * n`` of the per-position sets.

    ``lists`` hold field elements.  Raises rather than truncating when more
    than ``L_cap`` messages qualify.
    """
    alpha = as_fraction(alpha)
    if len(lists) != code.n:
        raise ValueError(f"expected {code.n} lists, got {len(lists)}")
    book = code.codebook()
    member = np.zeros((code.n, code.q), dtype=bool)
    for i, s in enumerate(lists):
        for e in s:
            if not 0 <= e < code.q:
                raise ValueError(f"list symbol {e} is not a field element")
            member[i, e] = True
    agree = member[np.arange(code.n), book].sum(axis=1)
    # exact comparison agree >= alpha*n in integers
    winners = np.flatnonzero(agree * alpha.denominator >= alpha.numerator * code.n)
    if len(winners) > L_cap:
        raise ListSizeExceededError(len(winners), L_cap)
    return {code.message_at(int(w)) for w in winners}


@dataclass(frozen=True)
class CodecConfig:
    field_size: int
    n: int
    k: int
    delta: Fraction
    gamma: Fraction
    epsilon: Fraction
    seed: int = 0
    L_cap: int = 64
    alpha: Optional[Fraction] = None
    list_size: Optional[int] = None
    sync_alphabet: Optional[int] = None

    def __post_init__(self):
        for name in ("delta", "gamma", "epsilon"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.alpha is not None:
            object.__setattr__(self, "alpha", as_fraction(self.alpha))

    @classmethod
    def from_dict(cls, data: dict) -> "CodecConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown codec config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        out = {}
        for name in self.__dataclass_fields__:
            v = getattr(self, name)
            out[name] = str(v) if isinstance(v, Fraction) else v
        return out

    @classmethod
    def from_json(cls, text: str) -> "CodecConfig":
        return cls.from_dict(json.loads(text))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass
class InsdelCodec:
    """A list-recoverable outer code indexed by a synchronization string."""

    outer: RSCode
    sync: SyncString
    params: DecoderParams
    alpha: Fraction
    list_size: int
    L_cap: int = 64
    delta: Optional[Fraction] = None

    def __post_init__(self):
        self.alpha = as_fraction(self.alpha)
        if len(self.sync) != self.outer.n:
            raise ValueError(f"sync length {len(self.sync)} != outer block length {self.outer.n}")
        if self.params.epsilon is not None and self.params.gamma is not None:
            eps, gamma = self.params.epsilon, self.params.gamma
            if gamma > self.list_size * eps / 2 - 1:
                raise ValueError(
                    f"gamma = {gamma} exceeds l*eps/2 - 1 = {self.list_size * eps / 2 - 1}"
                )
        if self.params.K > self.list_size:
            raise ValueError(f"K = {self.params.K} rounds can exceed list size {self.list_size}")

    @property
    def n(self) -> int:
        return self.outer.n

    @property
    def q_index(self) -> int:
        return self.sync.q

    @property
    def q_combined(self) -> int:
        return self.outer.q * self.sync.q

    @property
    def rate(self) -> float:
        """Message symbols per channel symbol, in bits of the combined alphabet."""
        lc, ls = math.log(self.outer.q), math.log(self.sync.q)
        return float(self.outer.rate) * lc / (lc + ls)

    def ledger(self) -> dict:
        return {
            "field_size": self.outer.q,
            "n": self.n,
            "k": self.outer.k,
            "outer_rate": str(self.outer.rate),
            "K": self.params.K,
            "epsilon": str(self.params.epsilon),
            "gamma": str(self.params.gamma),
            "delta": None if self.delta is None else str(self.delta),
            "epsilon_prime": str(self.params.epsilon_prime),
            "sync_alphabet": self.sync.q,
            "alpha": str(self.alpha),
            "list_size": self.list_size,
            "L_cap": self.L_cap,
            "rate": self.rate,
        }


def build_codec(config: CodecConfig) -> InsdelCodec:
    """Construct the outer code, a certified index string and decoder parameters."""
    params = choose_params(config.epsilon, config.gamma)
    outer = RSCode(config.field_size, config.n, config.k)
    sync = construct_sync(
        SyncConstructionConfig(
            config.n, params.epsilon_prime, config.sync_alphabet, seed=config.seed
        )
    )
    alpha = config.alpha if config.alpha is not None else 1 - config.delta - config.epsilon
    if alpha <= 0:
        raise ValueError(f"alpha = 1 - delta - epsilon = {alpha} must be positive")
    list_size = config.list_size if config.list_size is not None else params.K
    return InsdelCodec(outer, sync, params, alpha, list_size, config.L_cap, config.delta)


def insdel_encode(codec: InsdelCodec, msg: Sequence[int]) -> SymbolString:
    return combine(rs_encode(codec.outer, msg), codec.sync.s)


def insdel_list_decode(codec: InsdelCodec, received: SymbolString) -> set[tuple[int, ...]]:
    decoded, _ = decode_with_lists(codec, received)
    return decoded


def decode_with_lists(codec: InsdelCodec, received: SymbolString):
    """Like :func:`insdel_list_decode` but also returns the candidate lists."""
    if received.q != codec.q_combined:
        raise ValueError(f"received alphabet {received.q} != codec alphabet {codec.q_combined}")
    payload, idx = split(received, codec.q_index)
    lists = global_list_decode(codec.sync, idx, payload, codec.params.K)
    sets = []
    for s in lists.symbol_sets():
        if len(s) > codec.list_size:
            raise ListRecoveryError(f"candidate list of {len(s)} symbols exceeds l = {codec.list_size}")
        sets.append({sym - 1 for sym in s})
    return brute_force_list_recover(codec.outer, sets, codec.alpha, codec.L_cap), lists


def lift_payload_pattern(p: CorruptionPattern, codec: InsdelCodec) -> CorruptionPattern:
    """Turn a payload-track pattern into one over the combined alphabet.

    An insertion in gap ``g`` borrows the index symbol of sent position
    ``g + 1`` (or ``n`` for the last gap), so it looks locally legitimate.
    """
    n = codec.n
    sync = codec.sync.symbols
    qi = codec.q_index
    ins = [(g, (s - 1) * qi + sync[min(g + 1, n) - 1]) for g, s in p.insertions]
    return CorruptionPattern(n, p.deletions, ins)
