"""Batch driver: ``synclist <subcommand> ...``.

Exit codes are 0 on success, 1 when the work itself fails (construction
gives up, verification fails, I/O) and 2 for usage or domain errors.
Relative ``--out`` paths land in ``$SYNCLIST_OUTPUT_DIR`` when it is set.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import random
import sys
from datetime import datetime, timezone
from fractions import Fraction
from io import StringIO
from pathlib import Path
from typing import Optional, Sequence

from . import bounds as bl
from . import sync as sy
from .channel import (
    ChannelBudget,
    CorruptionPattern,
    adversary_delete_least_frequent,
    adversary_insert_erasure,
    apply_pattern,
    find_confusable_pair,
    random_pattern,
    reachable,
)
from .codes import CodecConfig, ListRecoveryError, build_codec, insdel_encode, insdel_list_decode
from .kernels import SymbolString
from .pipeline import STRATEGIES, run_trials
from .random_codes import mc_random_code_list_profile

OUTPUT_DIR_ENV = "SYNCLIST_OUTPUT_DIR"


class UsageError(Exception):
    pass


class RunFailure(Exception):
    pass


# -- helpers ----------------------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _fraction_list(text: str) -> list[Fraction]:
    return [_fraction(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _out_path(out: Optional[str]) -> Optional[Path]:
    if out is None or out == "-":
        return None
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _stamp() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def _emit(args, text: str) -> None:
    path = _out_path(args.out)
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _emit_text(args, text: str) -> None:
    if not args.no_timestamp:
        text = f"# synclist {args.command} {_stamp()}\n" + text
    _emit(args, text)


def _emit_json(args, payload: dict) -> None:
    if not args.no_timestamp:
        payload = {"generated_at": _stamp(), **payload}
    _emit(args, json.dumps(payload, indent=2, default=str) + "\n")


def _say(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def _read_word(path: str) -> SymbolString:
    """A ``{q, symbols}`` object, bare or under ``codeword``/``received``."""
    data = json.loads(Path(path).read_text())
    for key in ("received", "codeword"):
        if key in data:
            data = data[key]
            break
    return SymbolString(int(data["q"]), data["symbols"])


def _word_dict(w: SymbolString) -> dict:
    return {"q": w.q, "symbols": list(w.symbols)}


CODEC_FLAGS = {
    "field_size": "field_size",
    "n": "n",
    "k": "k",
    "delta": "delta",
    "gamma": "gamma",
    "epsilon": "epsilon",
    "sync_seed": "seed",
    "L_cap": "L_cap",
    "alpha": "alpha",
    "list_size": "list_size",
    "sync_alphabet": "sync_alphabet",
}


def _codec_config(args) -> CodecConfig:
    """Config file first, then any flag given on the command line wins."""
    data: dict = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
    for flag, key in CODEC_FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            data[key] = v
    missing = [k for k in ("field_size", "n", "k", "delta", "gamma", "epsilon") if k not in data]
    if missing:
        raise UsageError(f"codec config is missing {', '.join(missing)}")
    return CodecConfig.from_dict(data)


# -- subcommands ------------------------------------------------------------


def cmd_sync(args) -> None:
    cfg = sy.SyncConstructionConfig(args.n, args.epsilon, args.q, args.seed, args.max_attempts)
    s = sy.construct_sync(cfg)
    _emit_text(args, sy.dumps(s))
    _say(args, f"built {s.epsilon}-synchronization string, n={len(s)}, q={s.q}, seed={args.seed}")


def cmd_verify(args) -> None:
    s = sy.loads(Path(args.file).read_text(), verify=False)
    eps = args.epsilon if args.epsilon is not None else s.epsilon
    ok, violation = sy.verify_sync(s.s, eps)
    result = {"file": args.file, "n": len(s), "q": s.q, "epsilon": str(eps), "sync": ok,
              "violation": violation}
    if args.substrings:
        result["substrings_self_matching"] = sy.check_substrings_self_matching(s.s, eps)
    _emit_json(args, result)
    if not ok or result.get("substrings_self_matching") is False:
        raise RunFailure(f"{args.file} is not a {eps}-synchronization string (violation {violation})")


def cmd_encode(args) -> None:
    cfg = _codec_config(args)
    codec = build_codec(cfg)
    msg = tuple(_int_list(args.message))
    word = insdel_encode(codec, msg)
    _emit_json(args, {"config": cfg.to_dict(), "message": list(msg), "codeword": _word_dict(word)})


def cmd_corrupt(args) -> None:
    x = _read_word(args.input)
    budget = ChannelBudget(args.delta, args.gamma, len(x))
    if args.strategy == "random":
        p = random_pattern(budget, args.seed, x.q)
    elif args.strategy == "delete-least-frequent":
        p = adversary_delete_least_frequent(x, args.delta)
    elif args.strategy == "insert-erasure":
        victims = random.Random(args.seed).sample(range(1, len(x) + 1), len(x))
        p = adversary_insert_erasure(x, args.gamma, victims, partial=True)
    else:
        p = CorruptionPattern(len(x))
    _emit_json(args, {
        "strategy": args.strategy, "seed": args.seed, "delta": str(args.delta), "gamma": str(args.gamma),
        "pattern": p.to_dict(), "received": _word_dict(apply_pattern(x, p)),
    })


def cmd_decode(args) -> None:
    cfg = _codec_config(args)
    codec = build_codec(cfg)
    received = _read_word(args.input)
    decoded = sorted(insdel_list_decode(codec, received))
    _emit_json(args, {"config": cfg.to_dict(), "decoded": [list(m) for m in decoded]})
    _say(args, f"{len(decoded)} candidate message(s)")


def cmd_pipeline(args) -> None:
    cfg = _codec_config(args)
    codec = build_codec(cfg)
    strategies = args.strategy or ["random", "delete-least-frequent", "insert-erasure"]
    rows = run_trials(codec, strategies, args.trials, args.seed, args.channel_delta, args.channel_gamma,
                      jobs=args.jobs)
    in_contract = [r for r in rows if r.in_contract]
    summary = {
        "trials": len(rows),
        "in_contract": len(in_contract),
        "in_contract_failures": sum(not r.contains_truth for r in in_contract),
        "max_decoded_list_size": max((r.decoded_list_size or 0 for r in rows), default=0),
    }
    effective = {
        "codec": cfg.to_dict(),
        "strategies": strategies,
        "trials": args.trials,
        "seed": args.seed,
        "channel_delta": str(args.channel_delta if args.channel_delta is not None else cfg.delta),
        "channel_gamma": str(args.channel_gamma if args.channel_gamma is not None else cfg.gamma),
    }
    if args.format == "csv":
        buf = StringIO()
        buf.write("# config " + json.dumps(effective, sort_keys=True) + "\n")
        cols = list(rows[0].to_dict()) if rows else []
        w = csv.DictWriter(buf, cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r.to_dict())
        _emit_text(args, buf.getvalue())
    else:
        _emit_json(args, {"config": effective, "codec": codec.ledger(), "summary": summary,
                          "rows": [r.to_dict() for r in rows]})
    _say(args, f"{summary['in_contract']} in-contract trials, "
               f"{summary['in_contract_failures']} without the sent message")


def cmd_bounds(args) -> None:
    names = args.bounds or list(bl.ALL_BOUNDS)
    unknown = [b for b in names if b not in bl.ALL_BOUNDS]
    if unknown:
        raise UsageError(f"unknown bound(s) {unknown}; choose from {', '.join(bl.ALL_BOUNDS)}")
    rows = bl.rate_report(args.q, args.delta or [], args.gamma or [], args.l or [], names)
    buf = StringIO()
    bl.write_csv(rows, buf)
    _emit_text(args, buf.getvalue())
    bad = sum(r.is_domain_error for r in rows)
    _say(args, f"{len(rows)} rows, {bad} domain_error")


def cmd_mc(args) -> None:
    if (args.delta is None) == (args.gamma is None):
        raise UsageError("give exactly one of --delta or --gamma")
    results = []
    for n in args.n:
        prof = mc_random_code_list_profile(
            args.q, n, args.rate, delta=args.delta, gamma=args.gamma, trials=args.trials,
            seed=args.seed, z_samples=args.z_samples, z_mode=args.z_mode, ensemble=args.ensemble,
            jobs=args.jobs,
        )
        d = prof.to_dict()
        d["estimate"] = d.pop("mean_count")
        if not args.per_trial:
            for key in ("trial_means", "trial_max", "codebook_sizes"):
                d.pop(key)
        results.append(d)
    config = {"q": args.q, "n": args.n, "rate": args.rate, "delta": args.delta and str(args.delta),
              "gamma": args.gamma and str(args.gamma), "trials": args.trials, "seed": args.seed,
              "z_samples": args.z_samples, "z_mode": args.z_mode, "ensemble": args.ensemble}
    _emit_json(args, {"config": config, "results": results})


def cmd_confuse(args) -> None:
    q, n = args.q, args.n
    k = args.k if args.k is not None else math.ceil(n * (1 - args.delta - args.gamma)) + 1
    if not 0 <= k <= n:
        raise UsageError(f"k must lie in 0..{n}, got {k}")
    if q**n > 2**22:
        raise UsageError(f"q^n = {q**n} is too many words to enumerate")
    ids = range(q**n)
    chosen = sorted(random.Random(args.seed).sample(ids, q**k)) if args.order == "random" else list(ids)[: q**k]

    def word(i):
        ds = []
        for _ in range(n):
            ds.append(i % q + 1)
            i //= q
        return SymbolString(q, reversed(ds))

    book = [word(i) for i in chosen]
    found = find_confusable_pair(book, args.delta, args.gamma)
    budget = ChannelBudget(args.delta, args.gamma, n)
    out = {"q": q, "n": n, "k": k, "delta": str(args.delta), "gamma": str(args.gamma),
           "order": args.order, "seed": args.seed, "codebook_size": len(book)}
    if found is None:
        out["pair"] = None
        _emit_json(args, out)
        raise RunFailure("no two codewords share a long enough prefix")
    x, y, z = found
    ok = all(reachable(c.symbols, z.symbols, budget.max_deletions, budget.max_insertions) for c in (x, y))
    out["pair"] = {"x": list(x.symbols), "y": list(y.symbols), "z": list(z.symbols), "reachable": ok}
    _emit_json(args, out)
    if not ok:  # pragma: no cover - would be a library bug
        raise RunFailure("returned pair does not re-verify")


# -- parser -----------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", "-o", help="output file (default stdout)")
    p.add_argument("--quiet", "-q", action="store_true", help="no human-readable summary on stderr")
    p.add_argument("--no-timestamp", action="store_true", help="omit the generation timestamp")


def _add_codec(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("codec (flags override --config)")
    g.add_argument("--config", help="JSON codec config")
    g.add_argument("--field-size", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--delta", type=_fraction)
    g.add_argument("--gamma", type=_fraction)
    g.add_argument("--epsilon", type=_fraction)
    g.add_argument("--sync-seed", type=int)
    g.add_argument("--L-cap", dest="L_cap", type=int)
    g.add_argument("--alpha", type=_fraction)
    g.add_argument("--list-size", type=int)
    g.add_argument("--sync-alphabet", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="synclist", description="List-decodable insdel code experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sync", help="construct a certified synchronization string")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=_fraction, required=True)
    p.add_argument("--q", type=int, help="alphabet size (default max(4, ceil(4/eps^2)))")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-attempts", type=int, default=1_000_000)
    _add_common(p)
    p.set_defaults(func=cmd_sync)

    p = sub.add_parser("verify", help="re-check a sync string file")
    p.add_argument("file")
    p.add_argument("--epsilon", type=_fraction, help="check at this epsilon instead of the file's")
    p.add_argument("--substrings", action="store_true", help="also check self-matching of every substring")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("encode", help="encode one message")
    p.add_argument("--message", required=True, help="comma-separated field elements")
    _add_codec(p)
    _add_common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("corrupt", help="run a word through a channel strategy")
    p.add_argument("--input", required=True, help="JSON word {q, symbols} (an encode output works)")
    p.add_argument("--strategy", choices=STRATEGIES, default="random")
    p.add_argument("--delta", type=_fraction, default=Fraction(0))
    p.add_argument("--gamma", type=_fraction, default=Fraction(0))
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("decode", help="list-decode a received word")
    p.add_argument("--input", required=True, help="JSON word, or a corrupt output")
    _add_codec(p)
    _add_common(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("pipeline", help="seeded encode/corrupt/decode trials")
    _add_codec(p)
    p.add_argument("--strategy", action="append", choices=STRATEGIES,
                   help="repeatable; default random, delete-least-frequent, insert-erasure")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--channel-delta", type=_fraction, help="channel budget if not the codec's")
    p.add_argument("--channel-gamma", type=_fraction)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("bounds", help="evaluate rate and alphabet bounds on a grid (CSV)")
    p.add_argument("--q", type=_int_list, required=True)
    p.add_argument("--delta", type=_fraction_list)
    p.add_argument("--gamma", type=_fraction_list)
    p.add_argument("--l", type=_int_list)
    p.add_argument("--bounds", type=lambda s: [b.strip() for b in s.split(",") if b.strip()],
                   help=f"subset of {', '.join(bl.ALL_BOUNDS)}")
    _add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("mc", help="Monte Carlo list sizes of random codes")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--delta", type=_fraction)
    p.add_argument("--gamma", type=_fraction)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--z-samples", type=int, default=32)
    p.add_argument("--z-mode", choices=("sample", "all"), default="sample")
    p.add_argument("--ensemble", choices=("bernoulli", "fixed"), default="bernoulli")
    p.add_argument("--per-trial", action="store_true", help="include per-trial details")
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("confuse", help="two codewords and one received word both reach")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=_fraction, required=True)
    p.add_argument("--gamma", type=_fraction, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--k", type=int, help="default ceil(n(1-delta-gamma)) + 1")
    p.add_argument("--order", choices=("random", "lex"), default="random",
                   help="which q^k words of [q]^n to keep")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_confuse)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, ValueError, KeyError, TypeError) as exc:
        print(f"synclist {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (RunFailure, sy.ConstructionError, ListRecoveryError, OSError) as exc:
        print(f"synclist {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
