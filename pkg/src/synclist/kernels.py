"""Exact string kernels over a finite alphabet.

Symbols are integers ``1..q``.  Edit distance throughout is the
insertion/deletion distance ``|x| + |y| - 2 * LCS(x, y)``; a substitution
costs 2.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np


class AlphabetMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"alphabet size must be >= 1, got {self.size}")

    def __contains__(self, symbol) -> bool:
        return 1 <= symbol <= self.size


@dataclass(frozen=True)
class SymbolString:
    """A finite sequence over the alphabet ``1..q``."""

    q: int
    symbols: tuple[int, ...]

    def __init__(self, q: int, symbols: Iterable[int] = ()):
        syms = tuple(int(s) for s in symbols)
        if q < 1:
            raise ValueError(f"alphabet size must be >= 1, got {q}")
        for s in syms:
            if not 1 <= s <= q:
                raise ValueError(f"symbol {s} outside alphabet 1..{q}")
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "symbols", syms)

    @classmethod
    def from_letters(cls, text: str, q: int | None = None) -> "SymbolString":
        """``"abc"`` -> (1, 2, 3).  ``q`` defaults to the largest letter used."""
        syms = [string.ascii_lowercase.index(ch) + 1 for ch in text]
        if q is None:
            q = max(syms, default=1)
        return cls(q, syms)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.q)

    def to_letters(self) -> str:
        return "".join(string.ascii_lowercase[s - 1] for s in self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return SymbolString(self.q, self.symbols[item])
        return self.symbols[item]

    def __add__(self, other: "SymbolString") -> "SymbolString":
        _same_alphabet(self, other)
        return SymbolString(self.q, self.symbols + other.symbols)


StringLike = Union[SymbolString, Sequence[int], str]


@dataclass(frozen=True)
class Matching:
    """Monotone index matching, stored as 1-based ``(a_i, b_i)`` pairs."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __len__(self):
        return len(self.pairs)

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(p[0] for p in self.pairs)

    @property
    def b(self) -> tuple[int, ...]:
        return tuple(p[1] for p in self.pairs)

    def is_valid(self, x: StringLike, y: StringLike | None = None, *, off_diagonal: bool = False) -> bool:
        xs = _symbols(x)
        ys = xs if y is None else _symbols(y)
        prev_a = prev_b = 0
        for a, b in self.pairs:
            if a <= prev_a or b <= prev_b:
                return False
            if not (1 <= a <= len(xs) and 1 <= b <= len(ys)):
                return False
            if xs[a - 1] != ys[b - 1]:
                return False
            if off_diagonal and a == b:
                return False
            prev_a, prev_b = a, b
        return True


def _symbols(x: StringLike) -> tuple:
    if isinstance(x, SymbolString):
        return x.symbols
    if isinstance(x, str):
        return tuple(x)
    return tuple(x)


def _same_alphabet(x, y) -> None:
    if isinstance(x, SymbolString) and isinstance(y, SymbolString) and x.q != y.q:
        raise AlphabetMismatchError(f"alphabet sizes differ: {x.q} vs {y.q}")


def lcs_table(xs: Sequence, ys: Sequence) -> np.ndarray:
    """Suffix LCS table: ``T[i, j] = LCS(xs[i:], ys[j:])``.

    Each row is ``max(row_below, diagonal_match)`` followed by a suffix
    running max, which is the textbook recurrence unrolled along ``j``.
    """
    n, m = len(xs), len(ys)
    table = np.zeros((n + 1, m + 1), dtype=np.int32)
    if n == 0 or m == 0:
        return table
    y_codes, x_keys = _encode_keys(ys, xs)
    y_arr = np.asarray(y_codes)
    for i in range(n - 1, -1, -1):
        below = table[i + 1]
        cand = np.maximum(below[:-1], np.where(y_arr == x_keys[i], below[1:] + 1, 0))
        table[i, :-1] = np.maximum.accumulate(cand[::-1])[::-1]
    return table


def _encode_keys(ys: Sequence, xs: Sequence):
    # map arbitrary hashable symbols onto small ints so numpy can compare them
    codes: dict = {}
    y_codes = [codes.setdefault(s, len(codes)) for s in ys]
    x_codes = [codes.get(s, -1) for s in xs]
    return y_codes, x_codes


def lcs_length(x: StringLike, y: StringLike) -> int:
    """Length-only LCS in linear space."""
    _same_alphabet(x, y)
    xs, ys = _symbols(x), _symbols(y)
    if not xs or not ys:
        return 0
    y_codes, x_codes = _encode_keys(ys, xs)
    y_arr = np.asarray(y_codes)
    row = np.zeros(len(ys) + 1, dtype=np.int32)
    for key in reversed(x_codes):
        cand = np.maximum(row[:-1], np.where(y_arr == key, row[1:] + 1, 0))
        row[:-1] = np.maximum.accumulate(cand[::-1])[::-1]
    return int(row[0])


def lcs(x: StringLike, y: StringLike) -> tuple[int, Matching]:
    """Longest common subsequence with a witness matching.

    Among all maximum matchings the one with the lexicographically smallest
    ``a``-sequence is returned, and for that ``a``-sequence the smallest
    ``b``-sequence.
    """
    _same_alphabet(x, y)
    xs, ys = _symbols(x), _symbols(y)
    pairs = _lcs_pairs(xs, ys)
    return len(pairs), Matching(tuple((a + 1, b + 1) for a, b in pairs))


def _lcs_pairs(xs: Sequence, ys: Sequence) -> list[tuple[int, int]]:
    """0-based witness pairs of the canonical maximum matching."""
    n, m = len(xs), len(ys)
    if n == 0 or m == 0:
        return []
    table = lcs_table(xs, ys).tolist()
    # next_occ[j][s]: first position >= j in ys holding symbol s
    next_occ: list[dict] = [dict() for _ in range(m + 1)]
    for j in range(m - 1, -1, -1):
        nxt = dict(next_occ[j + 1])
        nxt[ys[j]] = j
        next_occ[j] = nxt
    pairs = []
    i = j = 0
    remaining = table[0][0]
    while remaining:
        # smallest a >= i that can open a maximum matching of xs[i:], ys[j:]
        while True:
            b = next_occ[j].get(xs[i])
            if b is not None and table[i + 1][b + 1] == remaining - 1:
                break
            i += 1
        pairs.append((i, b))
        i, j = i + 1, b + 1
        remaining -= 1
    return pairs


def edit_distance(x: StringLike, y: StringLike) -> int:
    """Insertion/deletion distance."""
    _same_alphabet(x, y)
    return len(_symbols(x)) + len(_symbols(y)) - 2 * lcs_length(x, y)


def max_self_matching(s: StringLike) -> tuple[int, Matching]:
    """Largest monotone matching of ``s`` with itself that avoids ``a_i == b_i``."""
    xs = _symbols(s)
    n = len(xs)
    if n < 2:
        return 0, Matching()
    table = self_matching_table(xs)
    pairs = []
    i = j = 0
    while i < n and j < n:
        cur = table[i][j]
        if cur == 0:
            break
        if i != j and xs[i] == xs[j] and table[i + 1][j + 1] == cur - 1:
            pairs.append((i + 1, j + 1))
            i, j = i + 1, j + 1
        elif table[i + 1][j] == cur:
            i += 1
        else:
            j += 1
    return len(pairs), Matching(tuple(pairs))


def self_matching_table(xs: Sequence) -> list[list[int]]:
    """Suffix table ``T[i][j]`` of the best off-diagonal matching of ``xs[i:]`` vs ``xs[j:]``."""
    n = len(xs)
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row, below = table[i], table[i + 1]
        xi = xs[i]
        for j in range(n - 1, -1, -1):
            best = below[j] if below[j] > row[j + 1] else row[j + 1]
            if i != j and xi == xs[j] and below[j + 1] + 1 > best:
                best = below[j + 1] + 1
            row[j] = best
    return table


def is_subsequence(x: StringLike, z: StringLike) -> bool:
    """True iff ``x`` is obtainable from ``z`` by deletions only."""
    _same_alphabet(x, z)
    it = iter(_symbols(z))
    return all(any(c == d for d in it) for c in _symbols(x))


def count_distinct_subsequences(z: StringLike, m: int) -> int:
    """Number of distinct length-``m`` strings that occur as subsequences of ``z``."""
    zs = _symbols(z)
    if not 0 <= m <= len(zs):
        raise ValueError(f"length {m} outside 0..{len(zs)}")
    # rows[t][l]: distinct subsequences of length l in zs[:t]
    rows = [[1] + [0] * m]
    last: dict = {}
    for t, c in enumerate(zs, start=1):
        prev = rows[-1]
        cur = prev[:]
        before = rows[last[c] - 1] if c in last else None
        for length in range(1, m + 1):
            cur[length] += prev[length - 1] - (before[length - 1] if before else 0)
        last[c] = t
        rows.append(cur)
    return rows[-1][m]
