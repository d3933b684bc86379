"""Closed-form rate and alphabet bounds for list-decodable insdel codes.

Logarithms written ``log_q`` are base ``q``.  Terms of the form
``x * log(1/x)`` are extended continuously with value 0 at ``x = 0``.
Rates come back as floats; the piecewise-linear alphabet helper ``f`` is
exact.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, TextIO

from ._rational import as_fraction

TOL = 1e-12


class DomainError(ValueError):
    pass


def _xlog_inv(x: float, base: float) -> float:
    """``x * log_base(1/x)`` with the value 0 at ``x = 0``."""
    if x <= 0:
        return 0.0
    return -x * math.log(x) / math.log(base)


def _log_q(x: float, q: int) -> float:
    return math.log(x) / math.log(q)


def _check_q(q: int) -> None:
    if int(q) != q or q < 2:
        raise DomainError(f"alphabet size must be an integer >= 2, got {q}")


def _check_l(l: int) -> None:
    if int(l) != l or l < 1:
        raise DomainError(f"list size must be an integer >= 1, got {l}")


def _split_delta(delta: Fraction, q: int) -> tuple[int, Fraction]:
    d = math.floor(delta * q)
    return d, delta - Fraction(d, q)


def insertion_rate_upper(q: int, gamma) -> float:
    """Largest rate a list-decodable code can have against ``gamma * n`` insertions.

    ``gamma = q - 1`` is accepted and gives 0; past it no positive rate exists.
    """
    _check_q(q)
    gamma = as_fraction(gamma)
    if gamma < 0:
        raise DomainError(f"gamma must be nonnegative, got {gamma}")
    if gamma > q - 1:
        raise DomainError(
            f"gamma = {gamma} > q - 1 = {q - 1}: every word can be padded into 1..q blocks"
        )
    if gamma == 0:
        return 1.0
    g = float(gamma)
    return (
        1
        - _log_q(g + 1, q)
        - g * (_log_q((g + 1) / g, q) - _log_q(q / (q - 1), q))
    )


def deletion_f(delta, q: int) -> float:
    """``(1 - delta) * (1 - log_q(1 / (1 - delta)))``."""
    x = float(delta)
    if x >= 1:
        return 0.0
    return (1 - x) - _xlog_inv(1 - x, q)


def deletion_rate_upper(q: int, delta) -> float:
    """Upper bound on the rate under ``delta * n`` deletions.

    At multiples of ``1/q`` this is ``deletion_f``; in between it is the chord
    between the neighbouring multiples.  ``delta = (q-1)/q`` is accepted and
    gives 0.
    """
    _check_q(q)
    delta = as_fraction(delta)
    if not 0 <= delta <= Fraction(q - 1, q):
        raise DomainError(f"delta must lie in [0, {q - 1}/{q}], got {delta}")
    d, rest = _split_delta(delta, q)
    if rest == 0:
        return deletion_f(Fraction(d, q), q)
    w = float(q * rest)
    return (1 - w) * deletion_f(Fraction(d, q), q) + w * deletion_f(Fraction(d + 1, q), q)


def g_bits(x) -> float:
    """``(1 - x) * log2(1 / (1 - x))``, zero at ``x = 1``."""
    return _xlog_inv(1 - float(x), 2)


def f_piecewise(delta) -> Fraction:
    """Two segments through (0, 0), (1/2, 1/5) and (1, 0)."""
    x = as_fraction(delta)
    if not 0 <= x <= 1:
        raise DomainError(f"delta must lie in [0, 1], got {x}")
    return Fraction(2, 5) * (x if x <= Fraction(1, 2) else 1 - x)


def g_prime(delta, q: int) -> float:
    """Chord of ``g_bits`` between the multiples of ``1/q`` around ``delta``."""
    delta = as_fraction(delta)
    d, rest = _split_delta(delta, q)
    w = float(q * rest)
    lo = g_bits(Fraction(d, q))
    hi = g_bits(Fraction(min(d + 1, q), q))
    return (1 - w) * lo + w * hi


class CurveValues(NamedTuple):
    g: float
    f_piecewise: Fraction
    g_prime: float


def appendix_b_functions(delta, q: int) -> CurveValues:
    _check_q(q)
    delta = as_fraction(delta)
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    return CurveValues(g_bits(delta), f_piecewise(delta), g_prime(delta, q))


def alphabet_lower_bound(delta, epsilon) -> float:
    """Smallest alphabet compatible with rate ``1 - delta - epsilon`` under deletions."""
    delta, epsilon = as_fraction(delta), as_fraction(epsilon)
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    return 2.0 ** float(f_piecewise(delta) / epsilon)


def _check_delta_open(q: int, delta: Fraction) -> None:
    if not 0 <= delta < Fraction(q - 1, q):
        raise DomainError(f"delta must lie in [0, {q - 1}/{q}), got {delta}")


def random_deletion_converse(q: int, delta) -> float:
    """``1 - H_q(delta)``: above this, random codes stop being list-decodable."""
    _check_q(q)
    delta = as_fraction(delta)
    _check_delta_open(q, delta)
    x = float(delta)
    return 1 - _xlog_inv(1 - x, q) - _xlog_inv(x, q) - x * _log_q(q - 1, q)


def random_deletion_rate(q: int, delta, l: int) -> float:
    """Rate below which random codes are ``l``-list-decodable from deletions."""
    _check_l(l)
    x = float(as_fraction(delta))
    return random_deletion_converse(q, delta) - (1 - x) / (l + 1)


def random_insertion_rate(q: int, gamma, l: int) -> float:
    """Rate below which random codes are ``l``-list-decodable from insertions."""
    _check_q(q)
    _check_l(l)
    gamma = as_fraction(gamma)
    if not 0 <= gamma < q - 1:
        raise DomainError(f"gamma must lie in [0, {q - 1}), got {gamma}")
    g = float(gamma)
    head = 1 - _log_q(g + 1, q) - (g * _log_q((g + 1) / g, q) if g else 0.0)
    return head - (g + 1) / (l + 1)


def deletion_ensemble_bound(q: int, delta, n: int) -> int:
    """Exact count bounding the received words the deletion adversary leaves possible.

    The first ``n*q*delta'`` positions keep at most ``q - d - 1`` distinct
    symbols and the rest at most ``q - d``; lengths are rounded up so the
    count stays an upper bound at finite ``n``.
    """
    _check_q(q)
    delta = as_fraction(delta)
    _check_delta_open(q, delta)
    d, rest = _split_delta(delta, q)
    head_len = n * q * rest * (1 - Fraction(d + 1, q))
    tail_len = n * (1 - q * rest) * (1 - Fraction(d, q))
    size = math.comb(q, q - d) * (q - d) ** math.ceil(tail_len)
    if rest:
        size *= math.comb(q, q - d - 1) * (q - d - 1) ** math.ceil(head_len)
    return size


def ensemble_rate(q: int, delta, n: int) -> float:
    return math.log(deletion_ensemble_bound(q, delta, n)) / (n * math.log(q))


# -- grid reports -----------------------------------------------------------

PROVENANCE = {
    "insertion_upper": "converse:insertion-only",
    "deletion_upper": "converse:deletion-only",
    "random_deletion_rate": "random-coding:deletion",
    "random_deletion_converse": "random-coding:deletion-converse",
    "random_insertion_rate": "random-coding:insertion",
    "alphabet_lower_bound": "alphabet:deletion-capacity-gap",
}
ALL_BOUNDS = tuple(PROVENANCE)
CSV_COLUMNS = ("q", "delta", "gamma", "l", "bound_name", "value", "provenance")


@dataclass(frozen=True)
class ReportRow:
    q: int
    delta: Optional[Fraction]
    gamma: Optional[Fraction]
    l: Optional[int]
    bound_name: str
    value: Optional[float]
    provenance: str

    @property
    def is_domain_error(self) -> bool:
        return self.provenance == "domain_error"

    def as_csv(self) -> list[str]:
        def s(v):
            return "" if v is None else str(v)

        value = "" if self.value is None else repr(self.value)
        return [s(self.q), s(self.delta), s(self.gamma), s(self.l), self.bound_name, value, self.provenance]


def _alphabet_at_capacity(q: int, delta: Fraction) -> float:
    # gap between the trivial 1 - delta and the q-ary deletion bound
    eps = float(1 - delta) - deletion_rate_upper(q, delta)
    return alphabet_lower_bound(delta, Fraction(repr(eps)) if eps > 0 else 0)


def _evaluate(name: str, q: int, delta, gamma, l):
    if name == "insertion_upper":
        return insertion_rate_upper(q, gamma)
    if name == "deletion_upper":
        return deletion_rate_upper(q, delta)
    if name == "random_deletion_rate":
        return random_deletion_rate(q, delta, l)
    if name == "random_deletion_converse":
        return random_deletion_converse(q, delta)
    if name == "random_insertion_rate":
        return random_insertion_rate(q, gamma, l)
    if name == "alphabet_lower_bound":
        return _alphabet_at_capacity(q, as_fraction(delta))
    raise KeyError(name)


_NEEDS = {
    "insertion_upper": ("gamma",),
    "deletion_upper": ("delta",),
    "random_deletion_rate": ("delta", "l"),
    "random_deletion_converse": ("delta",),
    "random_insertion_rate": ("gamma", "l"),
    "alphabet_lower_bound": ("delta",),
}


def rate_report(
    qs: Iterable[int],
    deltas: Sequence = (),
    gammas: Sequence = (),
    ls: Sequence[int] = (),
    bounds: Sequence[str] = ALL_BOUNDS,
) -> list[ReportRow]:
    """Evaluate every requested bound on its slice of the grid.

    Out-of-domain cells become explicit ``domain_error`` rows.  Random-coding
    thresholds are clamped at 0 so every rate in the report lies in [0, 1].
    """
    deltas = [as_fraction(d) for d in deltas]
    gammas = [as_fraction(g) for g in gammas]
    rows = []
    for q in qs:
        for name in bounds:
            needs = _NEEDS[name]
            d_axis = deltas if "delta" in needs else [None]
            g_axis = gammas if "gamma" in needs else [None]
            l_axis = list(ls) if "l" in needs else [None]
            for delta in d_axis:
                for gamma in g_axis:
                    for l in l_axis:
                        try:
                            value = _evaluate(name, q, delta, gamma, l)
                            prov = PROVENANCE[name]
                            if name.startswith("random") and value < 0:
                                # a negative threshold guarantees nothing
                                value = 0.0
                        except (DomainError, ValueError):
                            value, prov = None, "domain_error"
                        rows.append(ReportRow(q, delta, gamma, l, name, value, prov))
    return rows


def write_csv(rows: Iterable[ReportRow], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.as_csv())


def read_csv(fh: TextIO) -> list[ReportRow]:
    out = []
    lines = (line for line in fh if not line.startswith("#"))
    for rec in csv.DictReader(lines):
        out.append(
            ReportRow(
                int(rec["q"]),
                Fraction(rec["delta"]) if rec["delta"] else None,
                Fraction(rec["gamma"]) if rec["gamma"] else None,
                int(rec["l"]) if rec["l"] else None,
                rec["bound_name"],
                float(rec["value"]) if rec["value"] else None,
                rec["provenance"],
            )
        )
    return out
