import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from synclist.channel import ChannelBudget, CorruptionPattern, apply_pattern, random_pattern
from synclist.codes import (
    CodecConfig,
    EnumerationCapError,
    ListSizeExceededError,
    RSCode,
    brute_force_list_recover,
    build_codec,
    insdel_encode,
    insdel_list_decode,
    lift_payload_pattern,
    rs_encode,
)
from synclist.gf import GF, field


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 16])
def test_field_axioms(q):
    F = GF(q)
    els = range(q)
    for a, b in itertools.product(els, els):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
    for a in els:
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert any(F.add(a, b) == 0 for b in els)
        if a:
            assert any(F.mul(a, b) == 1 for b in els)
    rng = random.Random(q)
    for _ in range(200):
        a, b, c = (rng.randrange(q) for _ in range(3))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_field_rejects_non_prime_power():
    for q in (1, 6, 12):
        with pytest.raises(ValueError):
            GF(q)
    assert field(16) is field(16)


def test_rs_examples():
    assert RSCode(5, 4, 2).encode((1, 1)) == (1, 2, 3, 4)
    code = RSCode(16, 15, 3)
    assert code.encode((0, 0, 0)) == (0,) * 15
    assert rs_encode(RSCode(5, 4, 2), (1, 1)).symbols == (2, 3, 4, 5)
    with pytest.raises(ValueError):
        RSCode(4, 5, 2)
    with pytest.raises(ValueError):
        code.encode((1, 2))


def test_rs_minimum_distance():
    code = RSCode(7, 6, 2)
    book = code.codebook()
    assert len(book) == 49
    for i in range(len(book)):
        for j in range(i + 1, len(book)):
            assert (book[i] != book[j]).sum() >= 6 - 2 + 1


def test_codebook_order_matches_encode():
    code = RSCode(8, 7, 2)
    book = code.codebook()
    for idx in (0, 1, 9, 63):
        assert tuple(book[idx]) == code.encode(code.message_at(idx))


def test_list_recovery_against_enumeration():
    code = RSCode(5, 5, 2)
    rng = random.Random(1)
    for _ in range(30):
        lists = [set(rng.sample(range(5), rng.randint(0, 2))) for _ in range(5)]
        alpha = Fraction(rng.randint(1, 5), 5)
        expected = {
            m for m in itertools.product(range(5), repeat=2)
            if sum(c in s for c, s in zip(code.encode(m), lists)) >= alpha * 5
        }
        assert brute_force_list_recover(code, lists, alpha, 25) == expected


def test_list_cap_raises():
    code = RSCode(5, 5, 2)
    with pytest.raises(ListSizeExceededError):
        brute_force_list_recover(code, [set(range(5))] * 5, 1, 3)


def test_enumeration_cap():
    code = RSCode(16, 15, 3, enumeration_cap=100)
    with pytest.raises(EnumerationCapError):
        code.codebook()


@pytest.fixture(scope="module")
def codec():
    return build_codec(CodecConfig(16, 15, 3, "1/5", "2/5", "1/4", seed=0))


def test_codec_parameters(codec):
    led = codec.ledger()
    assert led["K"] == 12 and led["alpha"] == "11/20" and led["list_size"] == 12
    assert 0 < codec.rate < float(codec.outer.rate)


def test_codec_rejects_large_gamma():
    with pytest.raises(ValueError):
        build_codec(CodecConfig(16, 15, 3, "1/5", "2/5", "1/4", list_size=4))


def test_codec_config_json():
    cfg = CodecConfig(16, 15, 3, "1/5", 0.4, Fraction(1, 4), alpha="1/2")
    back = CodecConfig.from_json(cfg.to_json())
    assert back == cfg and back.gamma == Fraction(2, 5)
    with pytest.raises(ValueError):
        CodecConfig.from_dict({**cfg.to_dict(), "bogus": 1})


def test_clean_round_trip(codec):
    for msg in [(0, 0, 0), (1, 2, 3), (15, 15, 15)]:
        assert insdel_list_decode(codec, insdel_encode(codec, msg)) == {msg}


def test_random_channel(codec):
    budget = ChannelBudget(Fraction(1, 5), Fraction(2, 5), 15)
    rng = random.Random(4)
    for t in range(25):
        msg = tuple(rng.randrange(16) for _ in range(3))
        x = insdel_encode(codec, msg)
        recv = apply_pattern(x, random_pattern(budget, t, x.q))
        assert msg in insdel_list_decode(codec, recv)


def test_lift_borrows_sync_symbol(codec):
    p = CorruptionPattern(15, {2}, [(0, 3), (15, 1)])
    lifted = lift_payload_pattern(p, codec)
    s = codec.sync.symbols
    assert lifted.deletions == p.deletions
    assert lifted.insertions == ((0, 2 * codec.q_index + s[0]), (15, s[14]))
