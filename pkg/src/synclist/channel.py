"""Insertion/deletion channels as explicit corruption scripts.

Every pattern is anchored to coordinates of the sent string: deletions name
sent positions (1-based) and each insertion names the gap it lands in, where
gap ``g`` sits right after sent position ``g`` (gap 0 is before the first
symbol).  Insertions sharing a gap keep their list order.
"""
from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ._rational import as_fraction
from .kernels import SymbolString


@dataclass(frozen=True)
class CorruptionPattern:
    n: int
    deletions: frozenset = frozenset()
    insertions: tuple = ()

    def __init__(self, n: int, deletions=(), insertions=()):
        dels = frozenset(int(d) for d in deletions)
        ins = tuple((int(g), int(s)) for g, s in insertions)
        for d in dels:
            if not 1 <= d <= n:
                raise ValueError(f"deletion position {d} outside 1..{n}")
        for g, _ in ins:
            if not 0 <= g <= n:
                raise ValueError(f"insertion gap {g} outside 0..{n}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "deletions", dels)
        object.__setattr__(self, "insertions", ins)

    @property
    def num_deletions(self) -> int:
        return len(self.deletions)

    @property
    def num_insertions(self) -> int:
        return len(self.insertions)

    def within(self, budget: "ChannelBudget") -> bool:
        return (
            self.n == budget.n
            and self.num_deletions <= budget.max_deletions
            and self.num_insertions <= budget.max_insertions
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "del": sorted(self.deletions),
            "ins": [[g, s] for g, s in self.insertions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CorruptionPattern":
        return cls(data["n"], data.get("del", ()), [tuple(p) for p in data.get("ins", ())])

    @classmethod
    def from_json(cls, text: str) -> "CorruptionPattern":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ChannelBudget:
    delta: Fraction
    gamma: Fraction
    n: int

    def __init__(self, delta, gamma, n: int):
        delta, gamma = as_fraction(delta), as_fraction(gamma)
        if not 0 <= delta < 1:
            raise ValueError(f"delta must lie in [0, 1), got {delta}")
        if gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {gamma}")
        if n < 0:
            raise ValueError("n must be nonnegative")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "n", int(n))

    @property
    def max_deletions(self) -> int:
        return math.floor(self.delta * self.n)

    @property
    def max_insertions(self) -> int:
        return math.floor(self.gamma * self.n)


def apply_pattern(x: SymbolString, p: CorruptionPattern) -> SymbolString:
    out, _ = apply_pattern_traced(x, p)
    return out


def apply_pattern_traced(x: SymbolString, p: CorruptionPattern) -> tuple[SymbolString, list[Optional[int]]]:
    """Apply ``p`` and also report, per received symbol, the sent position it came from.

    Inserted symbols map to ``None``.
    """
    if p.n != len(x):
        raise ValueError(f"pattern is for length {p.n}, string has length {len(x)}")
    by_gap: dict[int, list[int]] = {}
    for g, s in p.insertions:
        if not 1 <= s <= x.q:
            raise ValueError(f"inserted symbol {s} outside alphabet 1..{x.q}")
        by_gap.setdefault(g, []).append(s)
    out: list[int] = list(by_gap.get(0, ()))
    origin: list[Optional[int]] = [None] * len(out)
    for pos in range(1, len(x) + 1):
        if pos not in p.deletions:
            out.append(x[pos - 1])
            origin.append(pos)
        extra = by_gap.get(pos, ())
        out.extend(extra)
        origin.extend([None] * len(extra))
    return SymbolString(x.q, out), origin


def survivor_map(p: CorruptionPattern) -> dict[int, int]:
    """Sent position -> 1-based received position, for positions that survive."""
    before: Counter = Counter(g for g, _ in p.insertions)
    mapping = {}
    r = before.get(0, 0)
    for pos in range(1, p.n + 1):
        if pos not in p.deletions:
            r += 1
            mapping[pos] = r
        r += before.get(pos, 0)
    return mapping


def random_pattern(budget: ChannelBudget, seed: int, q: int) -> CorruptionPattern:
    """Exactly the budgeted numbers of uniform deletions and uniform insertions."""
    rng = random.Random(seed)
    n = budget.n
    dels = rng.sample(range(1, n + 1), budget.max_deletions)
    ins = [(rng.randint(0, n), rng.randint(1, q)) for _ in range(budget.max_insertions)]
    ins.sort(key=lambda item: item[0])
    return CorruptionPattern(n, dels, ins)


def _least_frequent(symbols: Sequence[int], q: int, count: int) -> set[int]:
    freq = Counter(symbols)
    ranked = sorted(range(1, q + 1), key=lambda s: (freq.get(s, 0), s))
    return set(ranked[:count])


def adversary_delete_least_frequent(x: SymbolString, delta) -> CorruptionPattern:
    """Deletion adversary that starves the received word of distinct symbols.

    With ``d = floor(delta*q)`` and ``delta' = delta - d/q`` the first
    ``floor(n*q*delta')`` positions lose every copy of their ``d + 1`` least
    frequent symbols and the remaining positions lose their ``d`` least
    frequent ones.  Unused budget then removes the earliest survivors.
    """
    delta = as_fraction(delta)
    q, n = x.q, len(x)
    if not 0 <= delta <= Fraction(q - 1, q):
        raise ValueError(f"delta must lie in [0, {q - 1}/{q}], got {delta}")
    budget = math.floor(delta * n)
    if budget == 0:
        return CorruptionPattern(n)
    d = math.floor(delta * q)
    rest = delta - Fraction(d, q)
    cut = math.floor(n * q * rest)
    head, tail = x.symbols[:cut], x.symbols[cut:]
    doomed_head = _least_frequent(head, q, d + 1)
    doomed_tail = _least_frequent(tail, q, d)
    dels = [i + 1 for i, s in enumerate(head) if s in doomed_head]
    dels += [cut + i + 1 for i, s in enumerate(tail) if s in doomed_tail]
    chosen = set(dels)
    assert len(chosen) <= budget
    for pos in range(1, n + 1):
        if len(chosen) >= budget:
            break
        chosen.add(pos)
    return CorruptionPattern(n, chosen)


def adversary_insert_erasure(
    x: SymbolString,
    gamma,
    positions: Optional[Sequence[int]] = None,
    partial: bool = False,
) -> CorruptionPattern:
    """Spend ``q - 1`` insertions per victim so its neighbourhood reads ``1, 2, ..., q``.

    Victims default to the first ``floor(gamma*n / (q-1))`` positions.  With
    ``partial`` the leftover insertions (fewer than ``q - 1``) start the same
    window around the next victim instead of going unused.
    """
    gamma = as_fraction(gamma)
    if gamma < 0:
        raise ValueError(f"gamma must be nonnegative, got {gamma}")
    q, n = x.q, len(x)
    budget = math.floor(gamma * n)
    if q < 2 or n == 0:
        return CorruptionPattern(n)
    t = min(budget // (q - 1), n)
    order = list(positions) if positions is not None else list(range(1, n + 1))
    if len(set(order)) != len(order) or any(not 1 <= p <= n for p in order):
        raise ValueError("victim positions must be distinct and within 1..n")
    victims = sorted(order[:t])
    leftover = budget - t * (q - 1)
    partial_victim = order[t] if partial and leftover and t < len(order) else None
    plan = [(p, q - 1) for p in victims]
    if partial_victim is not None:
        plan.append((partial_victim, leftover))
    plan.sort()
    ins = []
    for pos, amount in plan:
        v = x[pos - 1]
        missing = [s for s in range(1, q + 1) if s != v][:amount]
        ins += [(pos - 1, s) for s in missing if s < v]
        ins += [(pos, s) for s in missing if s > v]
    ins.sort(key=lambda item: item[0])
    return CorruptionPattern(n, (), ins)


def reachable(x: Sequence[int], z: Sequence[int], max_deletions: int, max_insertions: int) -> bool:
    """Can ``z`` be produced from ``x`` by at most the given deletions followed by insertions?

    The best intermediate word is a longest common subsequence, so this is one
    plain O(|x||z|) table; it deliberately does not reuse the library kernels.
    """
    xs, zs = list(x), list(z)
    prev = [0] * (len(zs) + 1)
    for a in xs:
        cur = [0]
        for j, b in enumerate(zs):
            cur.append(prev[j] + 1 if a == b else max(prev[j + 1], cur[j]))
        prev = cur
    common = prev[-1]
    return len(xs) - common <= max_deletions and len(zs) - common <= max_insertions


def find_confusable_pair(codebook: Sequence[SymbolString], delta, gamma):
    """Two codewords and one received word that both can produce within budget.

    Codewords agreeing on their first ``P = n - floor(gamma n) - floor(delta n)``
    symbols split as ``x = s t u`` and ``y = s v w``; then ``z = s t v`` comes
    from ``x`` by dropping ``u`` and appending ``v``, and from ``y`` by dropping
    ``w`` and inserting ``t``.  Returns ``None`` when no two codewords share
    such a prefix.
    """
    if not codebook:
        return None
    n = len(codebook[0])
    q = codebook[0].q
    for c in codebook:
        if len(c) != n:
            raise ValueError("codewords have inconsistent lengths")
        if c.q != q:
            raise ValueError("codewords use different alphabets")
    budget = ChannelBudget(delta, gamma, n)
    # a budget larger than the block only needs n symbols' worth of edits
    dels = min(budget.max_deletions, n)
    ins = min(budget.max_insertions, n - dels)
    prefix = n - ins - dels
    seen: dict[tuple, SymbolString] = {}
    for y in codebook:
        key = y.symbols[:prefix]
        x = seen.get(key)
        if x is None:
            seen[key] = y
            continue
        if x.symbols == y.symbols:
            continue
        s = x.symbols[:prefix]
        t = x.symbols[prefix:prefix + ins]
        v = y.symbols[prefix:prefix + ins]
        z = SymbolString(q, s + t + v)
        return x, y, z
    return None
