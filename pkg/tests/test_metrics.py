import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcpc.errors import BadBlockId, InvalidArgs, NotConsecutive
from fcpc.gf import field_new, space_digits
from fcpc.metrics import (
    DistanceMatrix,
    block_distance,
    block_distance_grouped,
    block_distance_matrix,
    pdm,
    pdrm,
    pdrm_grouped,
    weight_representatives,
)
from fcpc.partitions import ExplicitPartition, GroupedWeightPartition, hwdf_partition, materialize, weight_partition

F2, F3 = field_new(2), field_new(3)


def brute_distance_matrix(P):
    digits = space_digits(P.q, P.k)
    d = (digits[:, None, :] != digits[None, :, :]).sum(axis=2)
    out = np.zeros((P.E, P.E), dtype=np.int64)
    for i, j in itertools.combinations(range(P.E), 2):
        out[i, j] = out[j, i] = d[np.ix_(P.block_of == i, P.block_of == j)].min()
    return out


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(2, 3), (2, 4), (3, 2), (3, 3)]), st.data())
def test_block_distance_matrix_brute(qk, data):
    q, k = qk
    F = field_new(q)
    labels = data.draw(st.lists(st.integers(0, 6), min_size=q**k, max_size=q**k))
    P = ExplicitPartition(F, k, labels)
    want = brute_distance_matrix(P)
    assert (block_distance_matrix(P) == want).all()
    for i, j in itertools.combinations(range(P.E), 2):
        assert block_distance(P, i, j) == want[i, j]


def test_layered_path_many_blocks():
    # more than 64 blocks takes the sphere-sweep route
    rng = np.random.default_rng(3)
    P = ExplicitPartition(F2, 7, rng.integers(0, 80, size=128))
    assert P.E > 64
    assert (block_distance_matrix(P) == brute_distance_matrix(P)).all()


def test_block_distance_errors():
    P = ExplicitPartition(F2, 2, [0, 1, 1, 0])
    with pytest.raises(BadBlockId):
        block_distance(P, 0, 5)
    assert block_distance(P, 1, 1) == 0


@pytest.mark.parametrize("k,T", [(6, 2), (7, 3), (5, 1), (8, 4)])
def test_grouped_distance_matches_materialized(k, T):
    G = hwdf_partition(k, T)
    want = brute_distance_matrix(materialize(G, F2))
    assert (block_distance_matrix(G) == want).all()
    for r, s in itertools.combinations(range(G.E), 2):
        assert block_distance_grouped(G, r, s) == want[r, s]


def test_grouped_distance_needs_intervals():
    G = GroupedWeightPartition(3, [[0, 2], [1, 3]])
    with pytest.raises(NotConsecutive):
        block_distance_grouped(G, 0, 1)
    # the general matrix still works and equals the materialized one
    assert (block_distance_matrix(G) == brute_distance_matrix(materialize(G, F2))).all()


def test_pdm_entries():
    P = ExplicitPartition(F2, 3, [bin(r).count("1") for r in range(8)])
    D = pdm(P, 1)
    for i, j in itertools.product(range(4), repeat=2):
        assert D[i, j] == (0 if i == j else max(3 - abs(i - j), 0))
    with pytest.raises(InvalidArgs):
        pdm(P, 0)


def test_pdrm_zero_within_block():
    P = ExplicitPartition(F2, 2, [0, 0, 1, 1])
    D = pdrm(P, 1, [0, 1, 2, 3])
    assert D.tolist() == [[0, 0, 2, 1], [0, 0, 1, 2], [2, 1, 0, 0], [1, 2, 0, 0]]


@pytest.mark.parametrize("k,t", [(3, 1), (3, 2), (5, 2), (6, 3)])
def test_pdrm_grouped_matches_representatives(k, t):
    G = weight_partition(k)
    P = materialize(G, F3)
    assert pdrm_grouped(G, t) == pdrm(P, t, weight_representatives(F3, k))


def test_distance_matrix_validation_and_io():
    with pytest.raises(InvalidArgs):
        DistanceMatrix([[0, 1], [2, 0]])
    with pytest.raises(InvalidArgs):
        DistanceMatrix([[1, 0], [0, 0]])
    D = DistanceMatrix([[0, 2, 1], [2, 0, 3], [1, 3, 0]], t=1, role="PDRM")
    assert DistanceMatrix.from_json(D.to_json()) == D
    assert D.to_csv().splitlines()[1] == "2,0,3"
    assert D.upper_sum() == 6
    perm = D.permuted([2, 0, 1])
    assert perm[0, 1] == D[2, 0]
