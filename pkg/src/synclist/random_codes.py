"""Subsequence probabilities and Monte Carlo profiles of random codes.

Everything here is about one event: a short string sitting inside a longer
one as a subsequence.  In the deletion picture the received word is the
short string and the codewords are long; with insertions it is the other way
round.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._rational import as_fraction
from .kernels import SymbolString, count_distinct_subsequences

Z95 = 1.959963984540054
MAX_WORDS = 2**24


@dataclass(frozen=True)
class ProbabilityEstimate:
    estimate: Fraction | float
    trials: int
    exact: bool
    ci: float = 0.0

    def __post_init__(self):
        if not 0 <= self.estimate <= 1:
            raise ValueError(f"probability estimate {self.estimate} outside [0, 1]")
        if self.exact and self.ci:
            raise ValueError("exact results carry no confidence radius")


def subsequence_prob_exact(z: SymbolString, m: int) -> ProbabilityEstimate:
    """Probability that a uniform length-``m`` string over ``z``'s alphabet is a subsequence of ``z``."""
    if not 0 <= m <= len(z):
        raise ValueError(f"m must lie in 0..{len(z)}, got {m}")
    count = count_distinct_subsequences(z, m)
    return ProbabilityEstimate(Fraction(count, z.q**m), z.q**m, True)


def leftmost_embedding_probability(N: int, m: int, q: int) -> Fraction:
    """Exact chance that a fixed length-``m`` string embeds in a uniform length-``N`` one.

    Sums over the end ``l`` of the leftmost embedding: ``C(l-1, m-1)`` ways
    to place it, ``q^-m`` for the matched symbols and ``(q-1)/q`` for every
    skipped one.  Since this does not depend on the fixed string it also
    equals the average of :func:`subsequence_prob_exact` over all ``z``.
    """
    if not 0 <= m <= N:
        raise ValueError(f"need 0 <= m <= N, got m={m} N={N}")
    if m == 0:
        return Fraction(1)
    miss = Fraction(q - 1, q)
    return sum(
        (math.comb(l - 1, m - 1) * miss ** (l - m) for l in range(m, N + 1)), Fraction(0)
    ) / q**m


def subsequence_prob_bound(N: int, m: int, q: int) -> Fraction:
    """Closed-form upper bound: the number of summands times the largest one.

    Terms are bounded by ``C(l, m) q^-m ((q-1)/q)^(l-m)``, which increases in
    ``l`` while ``l <= q*m``; so the bound needs ``N <= q*m``.  There are
    ``N - m + 1`` summands.
    """
    if not 0 <= m <= N:
        raise ValueError(f"need 0 <= m <= N, got m={m} N={N}")
    if N > q * m:
        raise ValueError(f"the largest-term argument needs N <= q*m, got N={N} m={m} q={q}")
    return (N - m + 1) * math.comb(N, m) * Fraction(q - 1, q) ** (N - m) / Fraction(q) ** m


def deletion_exponent(q: int, delta) -> float:
    """Per-symbol base-q exponent of P(fixed received word inside a random codeword)."""
    x = float(as_fraction(delta))
    h = 0.0
    for t in (x, 1 - x):
        if t > 0:
            h -= t * math.log(t, q)
    return h + x * math.log(q - 1, q) - 1


def insertion_exponent(q: int, gamma) -> float:
    """Per-codeword-symbol exponent of P(random codeword inside a random received word)."""
    g = float(as_fraction(gamma))
    val = g * math.log(q - 1, q) - 1 - g + math.log(1 + g, q)
    if g > 0:
        val += g * math.log((1 + g) / g, q)
    return val


# -- Monte Carlo ------------------------------------------------------------


def _digits(words: np.ndarray, q: int, n: int) -> np.ndarray:
    """Integer ids -> rows of symbols in 1..q, most significant first."""
    out = np.empty((len(words), n), dtype=np.int64)
    w = words.astype(np.int64)
    for j in range(n - 1, -1, -1):
        out[:, j] = w % q + 1
        w //= q
    return out


def sample_codebook(rng: np.random.Generator, q: int, n: int, R: float, ensemble: str = "bernoulli") -> np.ndarray:
    """Random code of rate about ``R`` as an array of rows over 1..q.

    ``bernoulli`` keeps every word of length ``n`` independently with
    probability ``q^((R-1)n)``, so the expected size is exactly ``q^(Rn)``.
    ``fixed`` draws ``q^ceil(Rn)`` words uniformly with replacement, which is
    the textbook random code but moves in jumps as ``n`` changes.
    """
    total = q**n
    if total > MAX_WORDS:
        raise ValueError(f"q^n = {total} exceeds the sampling cap {MAX_WORDS}")
    if ensemble == "bernoulli":
        size = int(rng.binomial(total, min(1.0, float(q) ** ((R - 1) * n))))
        words = rng.choice(total, size=size, replace=False)
    elif ensemble == "fixed":
        words = rng.integers(0, total, size=q ** math.ceil(R * n))
    else:
        raise ValueError(f"unknown ensemble {ensemble!r}")
    return _digits(np.sort(words), q, n)


def count_containing(codebook: np.ndarray, z: Sequence[int]) -> int:
    """Codewords that have ``z`` as a subsequence (deletion picture)."""
    z = np.asarray(z, dtype=np.int64)
    m = len(z)
    if m == 0:
        return len(codebook)
    padded = np.append(z, 0)
    j = np.zeros(len(codebook), dtype=np.int64)
    for col in codebook.T:
        j += col == padded[j]
    return int((j == m).sum())


def count_contained(codebook: np.ndarray, z: Sequence[int]) -> int:
    """Codewords that are subsequences of ``z`` (insertion picture)."""
    if len(codebook) == 0:
        return 0
    n = codebook.shape[1]
    padded = np.hstack([codebook, np.zeros((len(codebook), 1), dtype=codebook.dtype)])
    rows = np.arange(len(codebook))
    j = np.zeros(len(codebook), dtype=np.int64)
    for s in z:
        j += padded[rows, j] == s
    return int((j == n).sum())


@dataclass(frozen=True)
class ListProfile:
    q: int
    n: int
    R: float
    channel: str
    received_length: int
    seed: int
    trials: int
    z_mode: str
    z_per_trial: int
    ensemble: str
    mean_count: float
    ci: float
    max_count: int
    trial_means: tuple[float, ...]
    trial_max: tuple[int, ...]
    codebook_sizes: tuple[int, ...]

    def to_dict(self) -> dict:
        return asdict(self)


def _received_length(n: int, delta, gamma) -> tuple[str, int]:
    if (delta is None) == (gamma is None):
        raise ValueError("give exactly one of delta or gamma")
    if delta is not None:
        return "deletion", n - math.floor(as_fraction(delta) * n)
    return "insertion", n + math.floor(as_fraction(gamma) * n)


def _all_words(q: int, length: int) -> np.ndarray:
    if q**length > MAX_WORDS:
        raise ValueError(f"q^{length} words exceed the enumeration cap")
    return _digits(np.arange(q**length), q, length)


def _one_trial(args):
    q, n, R, channel, length, z_mode, z_samples, ensemble, seq = args
    rng = np.random.default_rng(seq)
    book = sample_codebook(rng, q, n, R, ensemble)
    if z_mode == "all":
        zs = _all_words(q, length)
    else:
        zs = rng.integers(1, q + 1, size=(z_samples, length))
    count = count_containing if channel == "deletion" else count_contained
    counts = [count(book, z) for z in zs]
    return float(np.mean(counts)), int(max(counts)), len(book)


def trial_seeds(seed: int, trials: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(trials)


def mc_random_code_list_profile(
    q: int,
    n: int,
    R: float,
    delta=None,
    gamma=None,
    trials: int = 100,
    seed: int = 0,
    z_samples: int = 64,
    z_mode: str = "sample",
    ensemble: str = "bernoulli",
    jobs: int = 1,
) -> ListProfile:
    """How many codewords of a random code fit one received word.

    Each trial draws a fresh code and scores ``z_samples`` uniform received
    words (or every word with ``z_mode='all'``).  The confidence radius is
    the 95% normal interval over per-trial means.
    """
    if q < 2 or n < 1 or trials < 1:
        raise ValueError("need q >= 2, n >= 1 and trials >= 1")
    if z_mode not in ("sample", "all"):
        raise ValueError(f"unknown z_mode {z_mode!r}")
    if z_mode == "sample" and z_samples < 1:
        raise ValueError("z_samples must be positive")
    channel, length = _received_length(n, delta, gamma)
    R = float(R)
    work = [
        (q, n, R, channel, length, z_mode, z_samples, ensemble, s)
        for s in trial_seeds(seed, trials)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_one_trial, work))
    else:
        results = [_one_trial(w) for w in work]
    means = np.array([r[0] for r in results])
    ci = Z95 * float(means.std(ddof=1)) / math.sqrt(trials) if trials > 1 else 0.0
    return ListProfile(
        q, n, R, channel, length, seed, trials, z_mode,
        q**length if z_mode == "all" else z_samples, ensemble,
        float(means.mean()), ci, max(r[1] for r in results),
        tuple(float(m) for m in means), tuple(r[1] for r in results),
        tuple(r[2] for r in results),
    )


def estimate_subsequence_prob(q: int, N: int, m: int, trials: int, seed: int = 0) -> ProbabilityEstimate:
    """Monte Carlo version of :func:`leftmost_embedding_probability`."""
    rng = np.random.default_rng(seed)
    z = rng.integers(1, q + 1, size=(trials, N))
    y = rng.integers(1, q + 1, size=(trials, m))
    padded = np.hstack([y, np.zeros((trials, 1), dtype=y.dtype)])
    rows = np.arange(trials)
    j = np.zeros(trials, dtype=np.int64)
    for col in z.T:
        j += padded[rows, j] == col
    p = float((j == m).mean())
    return ProbabilityEstimate(p, trials, False, Z95 * math.sqrt(p * (1 - p) / trials))
