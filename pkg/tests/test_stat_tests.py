import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bradfordizing.errors import DegenerateVarianceError, InsufficientDataError, NoInformationError
from bradfordizing.stat_tests import (
    EXACT_MAX_N,
    Method,
    average_ranks,
    paired_t_test,
    student_t_two_sided,
    wilcoxon_signed_rank,
)
from oracles import naive_average_ranks, student_t_two_sided_quad, wilcoxon_enumeration


def pairs_from(diffs):
    return [(d, 0.0) for d in diffs]


def test_three_positive_differences():
    r = wilcoxon_signed_rank(pairs_from([1, 2, 3]))
    assert r.statistic == 6.0
    assert r.p_value == 0.25
    assert r.method is Method.WILCOXON_EXACT
    assert not r.significant


def test_single_difference():
    r = wilcoxon_signed_rank(pairs_from([5]))
    assert r.p_value == 1.0 and r.n_effective == 1


def test_all_zero_differences():
    with pytest.raises(NoInformationError):
        wilcoxon_signed_rank([(0.3, 0.3), (0.1, 0.1)])


def test_zeros_are_dropped():
    r = wilcoxon_signed_rank(pairs_from([0, 1, 2, 3, 0]))
    assert (r.n_effective, r.zeros_dropped, r.n_pairs) == (3, 2, 5)
    assert r.p_value == 0.25


def test_float_noise_ties():
    # 0.6-0.3 and 0.9-0.6 differ in floating point but tie after rounding
    r = wilcoxon_signed_rank([(0.6, 0.3), (0.9, 0.6), (0.1, 0.2)])
    assert r.statistic == 5.0


def test_average_ranks_matches_naive():
    rng = random.Random(0)
    for _ in range(200):
        vals = [rng.choice([0.5, 1, 2, 2.5, 3]) for _ in range(rng.randint(1, 15))]
        assert average_ranks(np.array(vals)).tolist() == naive_average_ranks(vals)


def test_exact_matches_enumeration():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(1, 12)
        diffs = [rng.choice([-3, -2, -1, -0.5, 0, 0.5, 1, 2, 3]) for _ in range(n)]
        if not any(diffs):
            continue
        w, p = wilcoxon_enumeration(diffs)
        r = wilcoxon_signed_rank(pairs_from(diffs), method="exact")
        assert r.statistic == w
        assert abs(r.p_value - p) <= 1e-12


def test_auto_switches_to_normal():
    diffs = list(range(1, EXACT_MAX_N + 2))
    assert wilcoxon_signed_rank(pairs_from(diffs)).method is Method.WILCOXON_NORMAL
    assert wilcoxon_signed_rank(pairs_from(diffs[:-1])).method is Method.WILCOXON_EXACT
    with pytest.raises(ValueError):
        wilcoxon_signed_rank(pairs_from([1]), method="bogus")


def test_normal_close_to_exact_at_twenty():
    rng = np.random.default_rng(4)
    for _ in range(50):
        diffs = rng.permutation(np.arange(1, 21)) * rng.choice([-1, 1], 20)
        ex = wilcoxon_signed_rank(pairs_from(diffs), method="exact").p_value
        no = wilcoxon_signed_rank(pairs_from(diffs), method="normal").p_value
        assert abs(ex - no) < 0.01


def test_wilcoxon_against_scipy():
    from scipy.stats import wilcoxon

    rng = np.random.default_rng(9)
    for _ in range(30):
        d = np.round(rng.normal(0.3, 1, rng.integers(6, 20)), 1)
        d = d[d != 0]
        if len(set(np.abs(d))) != len(d):
            continue
        ours = wilcoxon_signed_rank(pairs_from(d)).p_value
        assert ours == pytest.approx(wilcoxon(d, method="exact").pvalue, abs=1e-12)


def test_paired_t_example():
    r = paired_t_test(pairs_from([1, 2, 3, 4, 5]))
    assert round(r.statistic, 4) == 4.2426
    assert r.df == 4
    # frozen from mpmath quadrature
    assert r.p_value == pytest.approx(0.013235599563682690, abs=1e-12)


def test_paired_t_swap_antisymmetry():
    pairs = [(0.3, 0.1), (0.5, 0.45), (0.2, 0.25), (0.7, 0.2)]
    a = paired_t_test(pairs)
    b = paired_t_test([(y, x) for x, y in pairs])
    assert a.statistic == pytest.approx(-b.statistic)
    assert a.p_value == pytest.approx(b.p_value)


def test_paired_t_errors():
    with pytest.raises(DegenerateVarianceError):
        paired_t_test(pairs_from([1, 1, 1]))
    with pytest.raises(InsufficientDataError):
        paired_t_test(pairs_from([1]))


def test_t_p_edge_values():
    assert student_t_two_sided(0.0, 5) == 1.0
    assert student_t_two_sided(math.inf, 5) == 0.0
    with pytest.raises(ValueError):
        student_t_two_sided(1.0, 0)
    # df = 1 is Cauchy
    assert student_t_two_sided(1.0, 1) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("df", [1, 2, 7, 30])
@pytest.mark.parametrize("t", [0.3, 2.0, 6.5])
def test_t_against_quadrature(t, df):
    assert abs(student_t_two_sided(t, df) - student_t_two_sided_quad(t, df)) < 1e-9


def test_result_serialization():
    d = paired_t_test(pairs_from([1, 2, 3, 4, 5])).to_dict()
    assert d["method"] == "paired_t" and d["df"] == 4
    assert d["statistic"] == 4.2426 and d["p_value"] == 0.01324
    w = wilcoxon_signed_rank(pairs_from([1, 2, 3])).to_dict()
    assert w["zeros_dropped"] == 0 and "df" not in w


diff_lists = st.lists(st.integers(-20, 20).map(lambda x: x / 4), min_size=2, max_size=15)


@settings(max_examples=150, deadline=None)
@given(diff_lists, st.randoms(use_true_random=False), st.sampled_from([0.5, 3.0, 10.0]))
def test_invariances(diffs, rnd, scale):
    shuffled = diffs[:]
    rnd.shuffle(shuffled)
    if any(diffs):
        a = wilcoxon_signed_rank(pairs_from(diffs))
        assert wilcoxon_signed_rank(pairs_from(shuffled)).p_value == pytest.approx(a.p_value, abs=1e-12)
        assert wilcoxon_signed_rank(pairs_from([d * scale for d in diffs])).p_value == pytest.approx(
            a.p_value, abs=1e-12)
        assert 0.0 <= a.p_value <= 1.0
    if len(set(diffs)) > 1:
        t = paired_t_test(pairs_from(diffs))
        assert paired_t_test(pairs_from(shuffled)).p_value == pytest.approx(t.p_value, rel=1e-9)
        assert paired_t_test(pairs_from([d * scale for d in diffs])).statistic == pytest.approx(
            t.statistic, rel=1e-9)


def test_tied_ranks_use_the_tied_null_distribution():
    # |d| ranks are (2, 2, 2, 4, 5); 4 of 32 sign assignments give W- <= 2.
    # An untied null (ranks 1..5) would give 0.1875 instead.
    diffs = [1, 1, 2, 3, -1]
    assert wilcoxon_signed_rank(pairs_from(diffs)).p_value == 0.25
    assert wilcoxon_enumeration(diffs)[1] == 0.25
