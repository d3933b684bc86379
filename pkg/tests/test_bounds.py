import io
import itertools
import math
from fractions import Fraction as F

import pytest

from synclist.bounds import (
    ALL_BOUNDS,
    DomainError,
    alphabet_lower_bound,
    appendix_b_functions,
    deletion_ensemble_bound,
    deletion_f,
    deletion_rate_upper,
    ensemble_rate,
    f_piecewise,
    g_bits,
    g_prime,
    insertion_rate_upper,
    random_deletion_converse,
    random_deletion_rate,
    random_insertion_rate,
    rate_report,
    read_csv,
    write_csv,
)
from synclist.channel import adversary_delete_least_frequent, apply_pattern
from synclist.kernels import SymbolString

TOL = 1e-12


def ln_entropy_q(x, q):
    # natural-log re-derivation of the q-ary entropy, independent of the module
    if x == 0:
        return 0.0
    return (-x * math.log(x) - (1 - x) * math.log(1 - x) + x * math.log(q - 1)) / math.log(q)


class TestInsertionUpper:
    def test_examples(self):
        assert insertion_rate_upper(5, 0) == 1
        assert insertion_rate_upper(2, 1) == pytest.approx(0, abs=TOL)

    def test_boundary_is_zero_for_every_q(self):
        for q in range(2, 20):
            assert insertion_rate_upper(q, q - 1) == pytest.approx(0, abs=TOL)

    def test_monotone(self):
        for q in (2, 3, 4, 8, 16):
            vals = [insertion_rate_upper(q, F(i, 20) * (q - 1)) for i in range(21)]
            assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            insertion_rate_upper(2, F(11, 10))
        with pytest.raises(DomainError):
            insertion_rate_upper(2, -1)
        with pytest.raises(DomainError):
            insertion_rate_upper(1, 0)


class TestDeletionUpper:
    def test_examples(self):
        assert deletion_rate_upper(3, 0) == 1
        assert deletion_rate_upper(2, F(1, 2)) == pytest.approx(0, abs=TOL)

    def test_interpolated(self):
        f = lambda d: (1 - d) * (1 - math.log(1 / (1 - d), 4))
        assert deletion_rate_upper(4, F(3, 8)) == pytest.approx(0.5 * f(0.25) + 0.5 * f(0.5), abs=TOL)

    def test_grid_points_hit_f(self):
        for q in (2, 3, 5, 8):
            for d in range(q):
                assert deletion_rate_upper(q, F(d, q)) == pytest.approx(deletion_f(F(d, q), q), abs=TOL)

    def test_decreasing(self):
        for q in (2, 4, 7):
            vals = [deletion_rate_upper(q, F(i, 40) * F(q - 1, q)) for i in range(41)]
            assert all(a >= b - TOL for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            deletion_rate_upper(2, F(3, 5))
        with pytest.raises(DomainError):
            deletion_rate_upper(4, -F(1, 8))


class TestCurveValues:
    def test_anchor_points(self):
        assert f_piecewise(F(1, 2)) == F(1, 5)
        assert f_piecewise(0) == 0 and f_piecewise(1) == 0
        assert g_bits(0.5) == pytest.approx(0.5, abs=TOL)

    def test_tuple(self):
        t = appendix_b_functions(F(1, 2), 2)
        assert t.f_piecewise == F(1, 5)
        assert t.g == pytest.approx(0.5) and t.g_prime == pytest.approx(0.5)
        with pytest.raises(DomainError):
            appendix_b_functions(0, 2)

    def test_g_prime_hits_g_at_multiples(self):
        for q in (2, 5, 9):
            for d in range(1, q):
                assert g_prime(F(d, q), q) == pytest.approx(g_bits(F(d, q)), abs=TOL)


class TestAlphabet:
    def test_examples(self):
        assert alphabet_lower_bound(F(1, 2), F(1, 5)) == 2
        assert alphabet_lower_bound(F(1, 4), F(1, 10)) == 2
        assert 1 < alphabet_lower_bound(F(1, 2), 1000) < 1.001

    def test_domain(self):
        with pytest.raises(DomainError):
            alphabet_lower_bound(F(1, 2), 0)
        with pytest.raises(DomainError):
            alphabet_lower_bound(1, F(1, 2))


class TestRandomCodes:
    def test_delta_zero(self):
        for l in (1, 3, 10):
            assert random_deletion_rate(4, 0, l) == pytest.approx(1 - 1 / (l + 1), abs=TOL)

    def test_large_l_limit(self):
        assert random_deletion_rate(3, F(1, 5), 10**9) == pytest.approx(
            random_deletion_converse(3, F(1, 5)), abs=1e-8
        )

    def test_natural_log_cross_check(self):
        expected = 1 - ln_entropy_q(0.25, 2) - 0.75 / 4
        assert random_deletion_rate(2, F(1, 4), 3) == pytest.approx(expected, abs=TOL)
        for q, d in itertools.product((2, 3, 8), (F(1, 10), F(1, 3))):
            if d < F(q - 1, q):
                assert random_deletion_converse(q, d) == pytest.approx(1 - ln_entropy_q(float(d), q), abs=TOL)

    def test_insertion_examples(self):
        for l in (1, 5):
            assert random_insertion_rate(3, F(1, 10**9), l) == pytest.approx(1 - 1 / (l + 1), abs=1e-6)
        g = 1.0
        expected = 1 - math.log(2, 4) - g * math.log(2, 4) - 2 / 10
        assert random_insertion_rate(4, 1, 9) == pytest.approx(expected, abs=TOL)

    def test_insertion_below_upper(self):
        for q in (2, 3, 4, 8):
            for i in range(1, 20):
                g = F(i, 20) * (q - 1)
                for l in (1, 2, 8, 32):
                    assert random_insertion_rate(q, g, l) <= insertion_rate_upper(q, g) + TOL

    def test_domains(self):
        with pytest.raises(DomainError):
            random_deletion_rate(2, F(1, 2), 3)
        with pytest.raises(DomainError):
            random_insertion_rate(2, 1, 3)
        with pytest.raises(DomainError):
            random_deletion_rate(2, F(1, 4), 0)


class TestEnsemble:
    @pytest.mark.parametrize("q,delta,n", [(2, F(1, 4), 8), (3, F(1, 3), 6), (3, F(1, 6), 6), (4, F(3, 8), 8)])
    def test_counts_every_adversary_output(self, q, delta, n):
        outs = set()
        for w in itertools.product(range(1, q + 1), repeat=n):
            x = SymbolString(q, w)
            outs.add(apply_pattern(x, adversary_delete_least_frequent(x, delta)).symbols)
        assert len(outs) <= deletion_ensemble_bound(q, delta, n)

    def test_rate_converges_to_leading_term(self):
        for q, delta in ((2, F(1, 4)), (4, F(3, 8)), (8, F(1, 2))):
            gaps = [ensemble_rate(q, delta, n) - deletion_rate_upper(q, delta) for n in (16, 32, 64, 128)]
            assert all(g > -TOL for g in gaps)
            assert all(b < a for a, b in zip(gaps, gaps[1:]))


class TestReport:
    def test_single_cell(self):
        rows = rate_report([2], deltas=[F(1, 2)], bounds=["deletion_upper"])
        assert len(rows) == 1
        assert rows[0].value == pytest.approx(0, abs=TOL) and not rows[0].is_domain_error

    def test_row_accounting(self):
        deltas = [0, F(1, 4), F(1, 2), F(3, 4)]
        gammas = [0, 1, 2]
        ls = [1, 4]
        rows = rate_report([2, 4], deltas, gammas, ls)
        per_q = {"insertion_upper": 3, "deletion_upper": 4, "random_deletion_rate": 8,
                 "random_deletion_converse": 4, "random_insertion_rate": 6, "alphabet_lower_bound": 4}
        assert len(rows) == 2 * sum(per_q.values())
        bad = [r for r in rows if r.is_domain_error]
        assert all(r.value is None for r in bad)
        assert {(r.q, r.bound_name, r.delta) for r in bad if r.bound_name == "deletion_upper"} == {(2, "deletion_upper", F(3, 4))}
        for r in rows:
            if not r.is_domain_error and r.bound_name != "alphabet_lower_bound":
                assert 0 <= r.value <= 1 + TOL

    def test_negative_thresholds_clamped(self):
        assert random_deletion_rate(2, F(2, 5), 1) < 0
        (row,) = rate_report([2], [F(2, 5)], ls=[1], bounds=["random_deletion_rate"])
        assert row.value == 0.0 and not row.is_domain_error

    def test_csv_round_trip(self):
        rows = rate_report([2, 3], [F(1, 3), F(2, 3)], [F(1, 2)], [2], ALL_BOUNDS)
        buf = io.StringIO()
        write_csv(rows, buf)
        text = buf.getvalue()
        assert text.splitlines()[0] == "q,delta,gamma,l,bound_name,value,provenance"
        back = read_csv(io.StringIO("# header\n" + text))
        assert back == rows
