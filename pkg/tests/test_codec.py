import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcpc.codec import (
    Encoding,
    construction_locally_bounded,
    decode,
    dense_encoding,
    encode_from_dcode,
    optimal_redundancy,
    per_block_encoding,
    verify_encoding,
)
from fcpc.contraction import weight_contraction
from fcpc.dcode import DCode
from fcpc.errors import CertificateMismatch, InvalidArgs, NotFullSize, NotLocallyBounded
from fcpc.gf import Word, field_new, space_digits
from fcpc.partitions import (
    ExplicitPartition,
    GroupedWeightPartition,
    coordinate_partition,
    hwdf_partition,
    materialize,
    support_partition,
    weight_partition,
)

F2, F3 = field_new(2), field_new(3)


def brute_verify(P, t, enc):
    cw = enc.codewords()
    for a, b in itertools.combinations(range(len(cw)), 2):
        if P.block_of[a] != P.block_of[b] and np.count_nonzero(cw[a] != cw[b]) < 2 * t + 1:
            return False
    return True


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=8, max_size=8), st.integers(1, 2), st.data())
def test_verify_methods_agree_with_brute(labels, t, data):
    P = ExplicitPartition(F2, 3, labels)
    r = data.draw(st.integers(0, 4))
    rows = ["".join(str(data.draw(st.integers(0, 1))) for _ in range(r)) for _ in range(8)]
    enc = dense_encoding(P, t, rows)
    want = brute_verify(P, t, enc)
    for method in ("exhaustive", "near-pair"):
        chk = verify_encoding(P, t, enc, method=method)
        assert chk.ok == want
        if not chk.ok:
            a, b = chk.witness
            cw = enc.codewords()
            assert P.block_of[a] != P.block_of[b]
            assert np.count_nonzero(cw[a] != cw[b]) == chk.distance < 2 * t + 1


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.integers(1, 2), st.data())
def test_weight_level_agrees_with_near_pair(k, t, data):
    # random consecutive groups, random redundancy per weight
    cuts = sorted(data.draw(st.sets(st.integers(1, k), max_size=3)))
    bounds = [0] + cuts + [k + 1]
    G = GroupedWeightPartition(k, [list(range(a, b)) for a, b in zip(bounds, bounds[1:])])
    r = data.draw(st.integers(0, 3))
    Z = np.array([[data.draw(st.integers(0, 1)) for _ in range(r)] for _ in range(k + 1)], dtype=np.uint8)
    enc = Encoding(G, F2, k, t, Z.reshape(k + 1, r), "weight")
    a = verify_encoding(G, t, enc, method="weight-level")
    b = verify_encoding(materialize(G, F2), t, enc, method="near-pair")
    c = verify_encoding(materialize(G, F2), t, enc, method="exhaustive")
    assert a.ok == b.ok == c.ok


def test_construction1_on_grouped_and_explicit():
    G = hwdf_partition(10, 5)
    enc = construction_locally_bounded(G, 1, F2)
    assert enc.r == 2 and verify_encoding(G, 1, enc)
    P = materialize(G, F2)
    enc2 = construction_locally_bounded(P, 1)
    assert enc2.r == 2 and verify_encoding(P, 1, enc2).ok
    # both forms give the same redundancy on every message
    digits = space_digits(2, 10)
    assert (enc.redundancy_digits(digits) == enc2.redundancy_digits(digits)).all()


def test_construction1_rejects_unbounded():
    with pytest.raises(NotLocallyBounded):
        construction_locally_bounded(weight_partition(5), 1, F2)


@pytest.mark.parametrize("P,t,r,method", [
    (materialize(weight_partition(3), F2), 1, 3, "Clique"),
    (support_partition(F2, 3), 1, 3, "Clique"),
    (coordinate_partition(F3, 3, [2, 3]), 1, 2, "Clique"),
])
def test_optimal_redundancy_families(P, t, r, method):
    cert, enc = optimal_redundancy(P, t)
    assert cert.r == r and cert.method == method and cert.exact
    assert verify_encoding(P, t, enc)
    full, enc_full = optimal_redundancy(P, t, strategy="FullPDRM")
    assert full.r == cert.r and full.method == "FullPDRM"


def test_optimal_redundancy_grouped_weight():
    cert, enc = optimal_redundancy(weight_partition(6), 2, field=F2)
    assert cert.exact and enc.weight_only()
    assert verify_encoding(weight_partition(6), 2, enc)


def test_strategy_errors():
    P = ExplicitPartition(F2, 3, [0, 1, 1, 1, 1, 1, 1, 2])
    with pytest.raises(InvalidArgs):
        optimal_redundancy(P, 1, strategy="ContractionOnly")
    with pytest.raises(InvalidArgs):
        optimal_redundancy(P, 1, strategy="Nope")
    Q = materialize(GroupedWeightPartition(4, [[0], [1, 2], [3, 4]]), F2)
    Q = ExplicitPartition(F2, 4, Q.block_of)  # drop the origin so no family applies
    with pytest.raises(NotFullSize):
        optimal_redundancy(Q, 1, strategy="CliqueOnly")


def test_encode_from_dcode_checks_certificate():
    C = weight_contraction(F2, 2)
    P = materialize(weight_partition(2), F2)
    with pytest.raises(CertificateMismatch):
        encode_from_dcode(P, 1, C, DCode.from_strings(F2, ["0", "0", "0"]))
    enc = encode_from_dcode(P, 1, C, DCode.from_strings(F2, ["000", "110", "011"]))
    assert verify_encoding(P, 1, enc)


def test_decode_corrects_t_errors():
    P = support_partition(F2, 3)
    cert, enc = optimal_redundancy(P, 1)
    for r in range(8):
        u = Word.from_rank(F2, 3, r)
        x = enc.encode(u)
        for pos in range(enc.n):
            y = list(x.digits)
            y[pos] ^= 1
            block, _ = decode(enc, np.array(y))
            assert block == P.block_of[r]
    with pytest.raises(InvalidArgs):
        decode(enc, np.zeros(2, dtype=int))


def test_encoding_json_roundtrip():
    P = support_partition(F3, 2)
    for enc in (optimal_redundancy(P, 1)[1],
                per_block_encoding(P, 1, ["00"] * P.E),
                dense_encoding(P, 1, ["1"] * 9),
                construction_locally_bounded(hwdf_partition(8, 4), 1, F2)):
        PP = enc.P
        back = Encoding.from_json(PP, enc.field, enc.to_json())
        assert (back.codewords() == enc.codewords()).all()
        assert back.r == enc.r


def test_per_block_needs_one_row_per_block():
    with pytest.raises(InvalidArgs):
        per_block_encoding(support_partition(F2, 2), 1, ["00"])
