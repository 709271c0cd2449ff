import math
from fractions import Fraction

import pytest

from fcpc.bounds import (
    S_weight,
    S_weight_branches,
    join_bounds,
    partition_gains,
    plotkin_lower,
    plotkin_value,
    support_bounds,
    support_sum,
    trivial_lower,
    weight_bounds,
)
from fcpc.dcode import min_dcode
from fcpc.errors import InvalidArgs
from fcpc.gf import field_new
from fcpc.metrics import pdrm, pdrm_grouped
from fcpc.partitions import support_partition, weight_partition
from fcpc.pgraph import support_clique

F2, F3 = field_new(2), field_new(3)


def test_plotkin_value_exact():
    # M=4, q=3, total 20: 2*3*20 / (16*2 - 1*2)
    assert plotkin_value(4, 3, 20) == Fraction(120, 30)
    with pytest.raises(InvalidArgs):
        plotkin_value(1, 2, 5)


@pytest.mark.parametrize("k,t", [(k, t) for k in range(1, 9) for t in range(1, 4)])
def test_S_weight_brute(k, t):
    brute = sum(max(2 * t + 1 - (j - i), 0) for i in range(k + 1) for j in range(i + 1, k + 1))
    assert S_weight(k, t) == brute


def test_S_branches_meet():
    for t in range(1, 21):
        a, b = S_weight_branches(2 * t, t)
        assert a == b


def test_support_sum_brute():
    for k in range(1, 6):
        for t in range(1, 3):
            brute = 0
            for A in range(2**k):
                for B in range(2**k):
                    brute += max(2 * t + 1 - bin(A ^ B).count("1"), 0) if A != B else 0
            assert 2 ** (k - 1) * support_sum(k, t) == brute // 2


def test_weight_and_support_bounds_values():
    w = weight_bounds(3, 2, F3)
    assert (w.lower, w.upper) == (4, 5)
    s = support_bounds(3, 2, F3)
    assert s.lower == 5 and s.lower_value == Fraction(92, 21) and s.upper == 6
    assert "unknown" in str(support_bounds(3, 2, F3, search=False).to_json()["upper"])


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("k,t", [(2, 1), (3, 1), (3, 2), (4, 1)])
def test_plotkin_below_search(q, k, t):
    F = field_new(q)
    D = pdrm_grouped(weight_partition(k), t)
    assert plotkin_lower(D, F) <= min_dcode(D, F).r_min
    S = pdrm(support_partition(F, k), t, list(support_clique(F, k)))
    if k <= 3:
        assert plotkin_lower(S, F) <= min_dcode(S, F, budget=10**7).r_min


def test_join_bounds_and_gains():
    jb = join_bounds([4, 4], 35, 2, n_full=46)
    assert (jb.lower, jb.upper) == (4, 8)
    jb = join_bounds([4, 4], 35, 2, n_full=40)
    assert jb.upper == 5
    assert partition_gains([4, 4], 4, 35) == (Fraction(2), Fraction(4, 39))
    assert partition_gains([2, 2], 3, 3) == (Fraction(1, 2), Fraction(1, 6))
    with pytest.raises(InvalidArgs):
        partition_gains([], 1, 1)


def test_trivial_lower():
    assert trivial_lower(1, 3) == 0
    assert trivial_lower(2, 3) == 6


def test_bound_report_consistency():
    with pytest.raises(AssertionError):
        from fcpc.bounds import BoundReport

        BoundReport(5, 4, "a", "b")
