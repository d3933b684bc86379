"""Seeded encode -> channel -> decode trials against a built codec."""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from ._rational import as_fraction
from .channel import (
    ChannelBudget,
    CorruptionPattern,
    adversary_delete_least_frequent,
    adversary_insert_erasure,
    apply_pattern,
    random_pattern,
)
from .codes import InsdelCodec, ListRecoveryError, decode_with_lists, insdel_encode, lift_payload_pattern, rs_encode
from .decoder import hit_statistics

STRATEGIES = ("none", "random", "delete-least-frequent", "insert-erasure")


@dataclass(frozen=True)
class TrialRow:
    trial: int
    strategy: str
    num_del: int
    num_ins: int
    hit_count: int
    max_list: int
    avg_list: float
    decoded_list_size: Optional[int]
    contains_truth: bool
    in_contract: bool
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


def trial_rng(seed: int, trial: int, strategy: str) -> random.Random:
    tag = STRATEGIES.index(strategy)
    state = np.random.SeedSequence([seed, tag, trial]).generate_state(2)
    return random.Random(int(state[0]) << 32 | int(state[1]))


def make_pattern(codec: InsdelCodec, strategy: str, payload, budget: ChannelBudget, rng: random.Random) -> CorruptionPattern:
    """Corruption of the combined word; adversaries look at the payload track only."""
    n = codec.n
    if strategy == "none":
        return CorruptionPattern(n)
    if strategy == "random":
        return random_pattern(budget, rng.getrandbits(63), codec.q_combined)
    if strategy == "delete-least-frequent":
        return adversary_delete_least_frequent(payload, budget.delta)
    if strategy == "insert-erasure":
        victims = rng.sample(range(1, n + 1), n)
        p = adversary_insert_erasure(payload, budget.gamma, victims, partial=True)
        return lift_payload_pattern(p, codec)
    raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")


def run_trial(codec: InsdelCodec, strategy: str, trial: int, seed: int, delta=None, gamma=None) -> TrialRow:
    """One trial; ``delta``/``gamma`` default to the codec's design point."""
    delta = as_fraction(codec.delta if delta is None else delta)
    gamma = as_fraction(codec.params.gamma if gamma is None else gamma)
    rng = trial_rng(seed, trial, strategy)
    msg = tuple(rng.randrange(codec.outer.q) for _ in range(codec.outer.k))
    payload = rs_encode(codec.outer, msg)
    sent = insdel_encode(codec, msg)
    budget = ChannelBudget(delta, gamma, codec.n)
    pattern = make_pattern(codec, strategy, payload, budget, rng)
    design = ChannelBudget(codec.delta, codec.params.gamma, codec.n)
    received = apply_pattern(sent, pattern)
    try:
        decoded, lists = decode_with_lists(codec, received)
        error = None
    except ListRecoveryError as exc:
        decoded, lists, error = None, None, str(exc)
    if lists is None:
        hit, max_list, avg = 0, 0, 0.0
    else:
        stats = hit_statistics(lists, pattern, payload)
        hit, max_list, avg = stats.hit_count, stats.max_list, float(stats.avg_list)
    return TrialRow(
        trial,
        strategy,
        pattern.num_deletions,
        pattern.num_insertions,
        hit,
        max_list,
        avg,
        None if decoded is None else len(decoded),
        decoded is not None and msg in decoded,
        pattern.within(design),
        error,
    )


def _run(args):
    return run_trial(*args)


def run_trials(
    codec: InsdelCodec,
    strategies: Sequence[str],
    trials: int,
    seed: int = 0,
    delta=None,
    gamma=None,
    jobs: int = 1,
) -> list[TrialRow]:
    """All strategies times all trials, ordered by (strategy, trial) whatever ``jobs`` is."""
    for s in strategies:
        if s not in STRATEGIES:
            raise ValueError(f"unknown strategy {s!r}; choose from {', '.join(STRATEGIES)}")
    work = [(codec, s, t, seed, delta, gamma) for s in strategies for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_run, work, chunksize=max(1, len(work) // (4 * jobs))))
    return [_run(w) for w in work]
