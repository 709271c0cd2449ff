import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcpc import kernels
from fcpc.dcode import DCode, assignment_order, min_dcode, n_classical, verify_dcode
from fcpc.errors import BudgetExceeded, InvalidArgs, SizeMismatch
from fcpc.gf import field_new, space_digits
from fcpc.metrics import DistanceMatrix

F2, F3 = field_new(2), field_new(3)

HAVE_CYTHON = True
try:
    kernels.backend("cython")
except ImportError:
    HAVE_CYTHON = False


def brute_exists(A, q, r):
    """Is there a D-code of length r?  Word 0 is pinned to zero (distances are translation invariant)."""
    M = len(A)
    digits = space_digits(q, r)
    d = (digits[:, None, :] != digits[None, :, :]).sum(axis=2)
    for rest in itertools.product(range(q**r), repeat=M - 1):
        w = (0,) + rest
        if all(d[w[i], w[j]] >= A[i][j] for i, j in itertools.combinations(range(M), 2)):
            return True
    return False


def brute_rmin(A, q, cap):
    for r in range(0, cap + 1):
        if brute_exists(A, q, r):
            return r
    return None


def sym_matrix(draw, M, hi):
    A = [[0] * M for _ in range(M)]
    for i, j in itertools.combinations(range(M), 2):
        A[i][j] = A[j][i] = draw(st.integers(0, hi))
    return A


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.data())
def test_min_dcode_matches_brute_binary(M, data):
    A = sym_matrix(data.draw, M, 3)
    rep = min_dcode(DistanceMatrix(A), F2, r_start=0)
    assert rep.exact
    assert rep.r_min == brute_rmin(A, 2, 6)
    assert verify_dcode(A, rep.witness)
    # every level below the answer was refuted
    assert [r for r, o, _ in rep.levels if o == "refuted"] == list(range(0, rep.r_min))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.data())
def test_min_dcode_matches_brute_ternary(M, data):
    A = sym_matrix(data.draw, M, 3)
    rep = min_dcode(DistanceMatrix(A), F3)
    assert rep.exact and rep.r_min == brute_rmin(A, 3, 4)
    assert verify_dcode(A, rep.witness)


def test_classical_values():
    # known minimum lengths of binary codes
    assert n_classical(4, 2, F2).r_min == 3
    assert n_classical(4, 3, F2).r_min == 5
    assert n_classical(8, 3, F2).r_min == 6
    assert n_classical(2, 5, F2).r_min == 5
    assert n_classical(3, 2, F3).r_min == 2
    assert n_classical(4, 4, F3).r_min == 5


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.sampled_from([2, 3]), st.data())
def test_symmetry_breaking_preserves_answer(M, q, data):
    A = sym_matrix(data.draw, M, 4)
    F = field_new(q)
    a = min_dcode(DistanceMatrix(A), F, budget=10**7)
    b = min_dcode(DistanceMatrix(A), F, budget=10**7, symmetry=False)
    assert a.r_min == b.r_min


@pytest.mark.skipif(not HAVE_CYTHON, reason="compiled kernels not built")
@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.sampled_from([2, 3, 4]), st.booleans(), st.data())
def test_backends_agree(M, q, symmetry, data):
    A = sym_matrix(data.draw, M, 4)
    F = field_new(q)
    a = min_dcode(DistanceMatrix(A), F, budget=10**7, symmetry=symmetry, backend="cython")
    b = min_dcode(DistanceMatrix(A), F, budget=10**7, symmetry=symmetry, backend="python")
    assert a.r_min == b.r_min
    assert a.levels == b.levels
    assert a.witness.to_json() == b.witness.to_json()
    assert a.backend == "cython" and b.backend == "python"


def test_zero_matrix_and_order():
    rep = min_dcode(DistanceMatrix(np.zeros((3, 3), dtype=int)), F2)
    assert rep.exact and rep.r_min == 0 and len(rep.witness) == 3
    A = np.array([[0, 1, 0, 3], [1, 0, 0, 1], [0, 0, 0, 0], [3, 1, 0, 0]])
    assert assignment_order(A) == [0, 3, 1]


def test_budget_behaviour():
    D = DistanceMatrix([[0, 4, 3, 2], [4, 0, 4, 3], [3, 4, 0, 4], [2, 3, 4, 0]])
    with pytest.raises(BudgetExceeded) as exc:
        min_dcode(D, F3, budget=0)
    assert exc.value.report.status == "BudgetExceeded"
    A = np.full((8, 8), 4)
    np.fill_diagonal(A, 0)
    with pytest.raises(BudgetExceeded) as exc:
        min_dcode(DistanceMatrix(A), F3, budget=5, r_start=1)
    rep = exc.value.report
    assert rep.lower >= 1 and rep.levels[-1][1] == "budget"


def test_lower_bound_only():
    rep = min_dcode(DistanceMatrix([[0, 3], [3, 0]]), F2, r_start=0, r_max=2)
    assert rep.status == "LowerBoundOnly" and rep.r_min is None and rep.lower == 3
    with pytest.raises(InvalidArgs):
        min_dcode(DistanceMatrix([[0, 3], [3, 0]]), F2, r_max=99)


def test_verify_dcode_violation():
    D = DistanceMatrix([[0, 2], [2, 0]])
    chk = verify_dcode(D, DCode.from_strings(F2, ["00", "01"]))
    assert not chk and chk.violation == (0, 1, 1, 2)
    with pytest.raises(SizeMismatch):
        verify_dcode(D, DCode.from_strings(F2, ["00"]))


def test_dcode_json():
    c = DCode.from_strings(F3, ["012", "210"])
    assert DCode.from_json(F3, c.to_json()).to_json() == c.to_json()
