"""Synchronization strings: exact verification and seeded construction.

A string ``S`` of length ``n`` is an eps-synchronization string when, for
every ``1 <= i < j < k <= n + 1``,

    ED(S[i, j), S[j, k)) > (1 - eps) * (k - i).

With ``ED = (k - i) - 2 * LCS`` this is ``2 * LCS < eps * (k - i)``, which is
what every check below evaluates, in integers.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, TextIO

from ._rational import as_fraction
from .kernels import SymbolString, lcs_length, self_matching_table


class ConstructionError(RuntimeError):
    """Raised when the sampler runs out of attempts."""


@dataclass(frozen=True)
class SyncString:
    s: SymbolString
    epsilon: Fraction
    certified: bool = False

    def __len__(self):
        return len(self.s)

    @property
    def q(self) -> int:
        return self.s.q

    @property
    def symbols(self) -> tuple[int, ...]:
        return self.s.symbols


@dataclass
class SyncConstructionConfig:
    n: int
    epsilon: Fraction
    alphabet_size: Optional[int] = None
    seed: int = 0
    max_attempts: int = 1_000_000

    def __post_init__(self):
        self.epsilon = as_fraction(self.epsilon)
        if not 0 < self.epsilon <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.alphabet_size is not None and self.alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")

    @property
    def q(self) -> int:
        return self.alphabet_size or default_alphabet_size(self.epsilon)


def default_alphabet_size(epsilon) -> int:
    eps = as_fraction(epsilon)
    return max(4, math.ceil(4 / eps**2))


def _check_eps(epsilon) -> Fraction:
    eps = as_fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {eps}")
    return eps


def verify_sync(s, epsilon) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Exact check over all triples; returns the lexicographically first violation.

    For each anchor ``(i, j)`` the LCS of ``S[i, j)`` against every prefix of
    ``S[j, n]`` comes out of one bit-parallel pass, so the whole check costs
    O(n^3) word operations.
    """
    eps = _check_eps(epsilon)
    num, den = eps.numerator, eps.denominator
    xs = s.symbols if hasattr(s, "symbols") else tuple(s)
    n = len(xs)
    for i in range(n):
        masks: dict = {}
        for j in range(i + 1, n + 1):
            # pattern is xs[i:j]; bit t stands for xs[i + t]
            m = j - i
            c = xs[j - 1]
            masks[c] = masks.get(c, 0) | (1 << (m - 1))
            full = (1 << m) - 1
            v = full
            for k in range(j, n):
                u = v & masks.get(xs[k], 0)
                v = ((v + u) | (v - u)) & full
                common = m - v.bit_count()
                # triple (i+1, j+1, k+2) in 1-based terms
                if 2 * common * den >= num * (k + 1 - i):
                    return False, (i + 1, j + 1, k + 2)
    return True, None


def verify_sync_naive(s, epsilon) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Triple-by-triple recomputation; only meant for cross-checking small inputs."""
    eps = _check_eps(epsilon)
    xs = s.symbols if hasattr(s, "symbols") else tuple(s)
    n = len(xs)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 2):
                left, right = xs[i - 1:j - 1], xs[j - 1:k - 1]
                ed = len(left) + len(right) - 2 * lcs_length(left, right)
                if not ed > (1 - eps) * (k - i):
                    return False, (i, j, k)
    return True, None


def verify_self_matching(s, epsilon) -> bool:
    eps = _check_eps(epsilon)
    xs = s.symbols if hasattr(s, "symbols") else tuple(s)
    if len(xs) < 2:
        return True
    best = self_matching_table(xs)[0][0]
    return best <= eps * len(xs)


def check_substrings_self_matching(s, epsilon) -> bool:
    """Every contiguous substring has self-matching at most ``eps`` times its length.

    One off-diagonal table per start index covers all ends at once, since the
    value for ``s[i:j]`` sits at the diagonal cell ``(j - i, j - i)`` of the
    prefix table of ``s[i:]``.
    """
    eps = as_fraction(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    xs = s.symbols if hasattr(s, "symbols") else tuple(s)
    n = len(xs)
    for i in range(n - 1):
        if not _prefix_self_matching_check(xs[i:], eps):
            return False
    return True


def _prefix_self_matching_check(xs, eps: Fraction) -> bool:
    # P[a][b]: best off-diagonal matching between xs[:a] and xs[:b]
    n = len(xs)
    prev = [0] * (n + 1)
    for a in range(1, n + 1):
        cur = [0] * (n + 1)
        xa = xs[a - 1]
        for b in range(1, n + 1):
            best = prev[b] if prev[b] > cur[b - 1] else cur[b - 1]
            if a != b and xa == xs[b - 1] and prev[b - 1] + 1 > best:
                best = prev[b - 1] + 1
            cur[b] = best
        if cur[a] > eps * a:
            return False
        prev = cur
    return True


def _extension_ok(xs: list, num: int, den: int) -> bool:
    """Check only the triples whose right end is the last symbol of ``xs``."""
    n = len(xs)
    masks: dict = {}
    # right block xs[j:n] read backwards is the pattern; bit t is xs[n-1-t]
    for j in range(n - 1, 0, -1):
        m = n - j
        c = xs[j]
        masks[c] = masks.get(c, 0) | (1 << (m - 1))
        full = (1 << m) - 1
        v = full
        for i in range(j - 1, -1, -1):
            u = v & masks.get(xs[i], 0)
            v = ((v + u) | (v - u)) & full
            if 2 * (m - v.bit_count()) * den >= num * (n - i):
                return False
    return True


def construct_sync(config: SyncConstructionConfig) -> SyncString:
    """Grow a string symbol by symbol, rejecting symbols that create a violation.

    Candidates at each position are tried in a seeded random order; a dead
    end backtracks one position.  Every rejected candidate counts against
    ``max_attempts``.  The result is re-verified from scratch before it is
    marked certified.
    """
    eps = config.epsilon
    num, den = eps.numerator, eps.denominator
    q = config.q
    rng = random.Random(config.seed)
    xs: list[int] = []
    orders: list[list[int]] = []
    failures = 0
    while len(xs) < config.n:
        if len(orders) == len(xs):
            order = list(range(1, q + 1))
            rng.shuffle(order)
            orders.append(order)
        pending = orders[-1]
        placed = False
        while pending:
            xs.append(pending.pop())
            if _extension_ok(xs, num, den):
                placed = True
                break
            xs.pop()
            failures += 1
            if failures >= config.max_attempts:
                raise ConstructionError(
                    f"no {eps}-synchronization string of length {config.n} over "
                    f"{q} symbols after {failures} rejected samples (seed {config.seed})"
                )
        if placed:
            continue
        orders.pop()
        if not xs:
            raise ConstructionError(
                f"no {eps}-synchronization string of length {config.n} exists over {q} symbols"
            )
        xs.pop()
    result = SymbolString(q, xs)
    ok, violation = verify_sync(result, eps)
    if not ok:  # pragma: no cover - guarded by the incremental check
        raise ConstructionError(f"post-hoc verification failed at {violation}")
    return SyncString(result, eps, certified=True)


def certify(s: SymbolString, epsilon) -> SyncString:
    eps = _check_eps(epsilon)
    ok, violation = verify_sync(s, eps)
    if not ok:
        raise ValueError(f"not a {eps}-synchronization string: violation at {violation}")
    return SyncString(s, eps, certified=True)


def dumps(sync: SyncString) -> str:
    header = f"{sync.q} {len(sync)} {sync.epsilon.numerator} {sync.epsilon.denominator}"
    return header + "\n" + " ".join(map(str, sync.symbols)) + "\n"


def loads(text: str, *, verify: bool = True) -> SyncString:
    """Parse the text format; ``verify`` re-runs the exact check before certifying.

    Lines starting with ``#`` are comments.
    """
    body = [line for line in text.splitlines() if not line.lstrip().startswith("#")]
    tokens = " ".join(body).split()
    if len(tokens) < 4:
        raise ValueError("sync file needs a 'q n epsilon_num epsilon_den' header")
    q, n, num, den = (int(t) for t in tokens[:4])
    symbols = [int(t) for t in tokens[4:]]
    if len(symbols) != n:
        raise ValueError(f"header says {n} symbols, found {len(symbols)}")
    s = SymbolString(q, symbols)
    eps = Fraction(num, den)
    if verify:
        return certify(s, eps)
    return SyncString(s, eps, certified=False)


def dump(sync: SyncString, fh: TextIO) -> None:
    fh.write(dumps(sync))


def load(fh: TextIO, *, verify: bool = True) -> SyncString:
    return loads(fh.read(), verify=verify)
