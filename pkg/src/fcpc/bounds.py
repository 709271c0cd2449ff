"""Closed-form redundancy bounds and multi-function gain accounting.

Everything is exact integer / Fraction arithmetic; a ceiling is taken only
where a length comes out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidArgs
from .gf import Field
from .metrics import DistanceMatrix

SEARCH_BUDGET = 10**6


@dataclass(frozen=True)
class BoundReport:
    lower: int
    upper: int | None  # None = unknown
    lower_source: str
    upper_source: str
    lower_value: Fraction | None = None  # before the ceiling, when a ratio was involved

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise AssertionError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    def to_json(self) -> dict:
        out = {
            "lower": self.lower,
            "upper": self.upper if self.upper is not None else "unknown",
            "provenance": {"lower": self.lower_source, "upper": self.upper_source},
        }
        if self.lower_value is not None:
            out["lower_value"] = str(self.lower_value)
            out["lower_value_float"] = float(self.lower_value)
        return out


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def plotkin_value(M: int, q: int, total: int) -> Fraction:
    """2q * total / (M^2 (q-1) - a (q-a)) with a = M mod q."""
    a = M % q
    denom = M * M * (q - 1) - a * (q - a)
    if denom <= 0:
        raise InvalidArgs(f"degenerate Plotkin denominator for M={M}, q={q}")
    return Fraction(2 * q * total, denom)


def plotkin_lower(D, field: Field | int) -> int:
    q = field if isinstance(field, int) else field.q
    A = D.entries if isinstance(D, DistanceMatrix) else np.asarray(D, dtype=np.int64)
    M = A.shape[0]
    total = int(np.triu(A, 1).sum())
    if M < 2 or total == 0:
        return 0
    return _ceil(plotkin_value(M, q, total))


def S_weight(k: int, t: int) -> int:
    """Sum over i<j of max(2t+1-|i-j|, 0) for 0 <= i, j <= k (closed form)."""
    if k <= 2 * t:
        num = k * (k + 1) * (6 * t + 1 - k)
        assert num % 6 == 0
        return num // 6
    num = t * (2 * t + 1) * (3 * k - 2 * t + 1)
    assert num % 3 == 0
    return num // 3


def S_weight_branches(k: int, t: int) -> tuple[Fraction, Fraction]:
    """Both closed-form branches, evaluated regardless of which applies."""
    return (Fraction(k * (k + 1) * (6 * t + 1 - k), 6), Fraction(t * (2 * t + 1) * (3 * k - 2 * t + 1), 3))


def _searched_upper(M: int, d: int, field: Field, budget: int) -> tuple[int | None, str]:
    from .dcode import n_classical

    try:
        rep = n_classical(M, d, field, budget=budget)
    except BudgetExceeded:
        return None, f"N({M},{d}) search exceeded {budget} nodes"
    if rep.r_min is None:
        return None, f"N({M},{d}) not found within the length limit"
    return rep.r_min, f"N({M},{d}) = {rep.r_min} by exact search"


def weight_bounds(k: int, t: int, field: Field, search: bool = True,
                  budget: int = SEARCH_BUDGET) -> BoundReport:
    if k < 1 or t < 1:
        raise InvalidArgs("need k >= 1 and t >= 1")
    q = field.q
    value = plotkin_value(k + 1, q, S_weight(k, t))
    upper, usrc = (None, "not searched")
    if search:
        upper, usrc = _searched_upper(min(2 * t + 1, k + 1), 2 * t, field, budget)
    return BoundReport(_ceil(value), upper, "plotkin bound on the weight-representative PDRM", usrc, value)


def support_sum(k: int, t: int) -> int:
    return sum((2 * t + 1 - s) * math.comb(k, s) for s in range(1, min(k, 2 * t) + 1))


def support_bounds(k: int, t: int, field: Field, search: bool = True,
                   budget: int = SEARCH_BUDGET) -> BoundReport:
    if k < 1 or t < 1:
        raise InvalidArgs("need k >= 1 and t >= 1")
    q = field.q
    M = 2**k
    # the unordered-pair total is 2^(k-1) * support_sum
    value = plotkin_value(M, q, 2 ** (k - 1) * support_sum(k, t))
    upper, usrc = (None, "not searched")
    if search:
        upper, usrc = _searched_upper(M, 2 * t, field, budget)
    return BoundReport(_ceil(value), upper, "plotkin bound on the support-clique PDRM", usrc, value)


def join_bounds(individual_r: Sequence[int], k: int, t: int, n_full: int | None = None) -> BoundReport:
    rs = list(individual_r)
    if not rs:
        raise InvalidArgs("need at least one individual redundancy")
    upper = sum(rs)
    usrc = "sum of individual redundancies"
    if n_full is not None and n_full - k < upper:
        upper = n_full - k
        usrc = f"N(q^k, 2t+1) - k with N supplied as {n_full}"
    return BoundReport(max(rs), upper, "largest individual redundancy", usrc)


def partition_gains(individual_r: Sequence[int], r: int, k: int) -> tuple[Fraction, Fraction]:
    """(redundancy gain, rate gain) of one joint encoding over K separate ones."""
    rs = list(individual_r)
    if not rs:
        raise InvalidArgs("need at least one individual redundancy")
    saved = sum(rs) - r
    return Fraction(saved, len(rs)), Fraction(saved, k + r)


def trivial_lower(E: int, t: int) -> int:
    return 2 * t if E >= 2 else 0
