"""Small finite fields GF(p^m) with full lookup tables.

Elements are the integers ``0..q-1``; element ``e`` stands for the polynomial
whose base-``p`` digits are the coefficients of ``e``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"field size must be a prime power >= 2, got {q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise ValueError(f"field size {q} is not a prime power")
    return p, m


def _digits(e: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(e % p)
        e //= p
    return out


def _undigits(ds, p: int) -> int:
    e = 0
    for d in reversed(ds):
        e = e * p + d
    return e


def _polymulmod(a, b, modulus, p):
    m = len(modulus) - 1
    prod = [0] * (2 * m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # modulus is monic of degree m
    for deg in range(len(prod) - 1, m - 1, -1):
        c = prod[deg]
        if c:
            for t in range(m + 1):
                prod[deg - m + t] = (prod[deg - m + t] - c * modulus[t]) % p
    return prod[:m]


def _is_irreducible(modulus, p: int) -> bool:
    # brute force: no monic factor of degree 1..m//2
    m = len(modulus) - 1
    for deg in range(1, m // 2 + 1):
        for low in product(range(p), repeat=deg):
            divisor = list(low) + [1]
            rem = list(modulus)
            for top in range(m, deg - 1, -1):
                c = rem[top]
                if c:
                    for t in range(deg + 1):
                        rem[top - deg + t] = (rem[top - deg + t] - c * divisor[t]) % p
            if not any(rem[:deg]):
                return False
    return True


class GF:
    def __init__(self, q: int):
        p, m = _factor_prime_power(q)
        self.q, self.p, self.m = q, p, m
        self.modulus = self._find_modulus()
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        digits = [_digits(e, p, m) for e in range(q)]
        for a in range(q):
            for b in range(q):
                add[a, b] = _undigits([(x + y) % p for x, y in zip(digits[a], digits[b])], p)
                if m == 1:
                    mul[a, b] = (a * b) % p
                else:
                    mul[a, b] = _undigits(_polymulmod(digits[a], digits[b], self.modulus, p), p)
        self.add_table, self.mul_table = add, mul

    def _find_modulus(self) -> tuple[int, ...]:
        if self.m == 1:
            return (0, 1)
        for low in product(range(self.p), repeat=self.m):
            cand = list(low) + [1]
            if cand[0] and _is_irreducible(cand, self.p):
                return tuple(cand)
        raise AssertionError("no irreducible polynomial found")  # pragma: no cover

    def __repr__(self):
        return f"GF({self.q})"

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
