import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcpc.errors import NotAPrimePower, SpaceTooLarge, TooLarge
from fcpc.gf import (
    IRREDUCIBLE,
    Word,
    ball_ranks,
    check_space,
    digits_to_rank,
    field_new,
    hamming_distance,
    prime_power,
    rank_to_digits,
    space_digits,
    support,
    weight,
)

QS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32]


@pytest.mark.parametrize("q", QS)
def test_field_axioms(q):
    F = field_new(q)
    r = np.arange(q)
    add, mul = F.add, F.mul
    # commutativity and identities
    assert (add == add.T).all() and (mul == mul.T).all()
    assert (add[0] == r).all() and (mul[1] == r).all() and (mul[0] == 0).all()
    # each row of add is a permutation; each nonzero row of mul too
    assert all(sorted(add[a]) == list(r) for a in r)
    assert all(sorted(mul[a]) == list(r) for a in r[1:])
    # associativity and distributivity
    for a, b, c in itertools.product(r, repeat=3) if q <= 9 else []:
        assert add[add[a, b], c] == add[a, add[b, c]]
        assert mul[mul[a, b], c] == mul[a, mul[b, c]]
        assert mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]
    for a in r[1:]:
        assert mul[a, F.inv[a]] == 1
        assert add[a, F.neg[a]] == 0
    assert (F.sub[r[:, None], r[None, :]] == add[r[:, None], F.neg[r][None, :]]).all()


@pytest.mark.parametrize("q", [q for q in QS if q > 8])
def test_distributivity_sampled(q):
    F = field_new(q)
    rng = np.random.default_rng(q)
    a, b, c = rng.integers(0, q, size=(3, 2000))
    assert (F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]).all()
    assert (F.mul[F.mul[a, b], c] == F.mul[a, F.mul[b, c]]).all()


def test_gf4_by_hand():
    # x^2 = x + 1 with x encoded as 2
    F = field_new(4)
    assert F.mul[2, 2] == 3 and F.mul[2, 3] == 1 and F.mul[3, 3] == 2
    assert F.add[2, 3] == 1


def test_multiplicative_group_cyclic():
    for q in IRREDUCIBLE:
        F = field_new(q)
        assert sorted(F.exp_table[: q - 1].tolist()) == list(range(1, q))


def test_prime_power_errors():
    assert prime_power(27) == (3, 3)
    with pytest.raises(NotAPrimePower):
        field_new(6)
    with pytest.raises(NotAPrimePower):
        prime_power(1)
    with pytest.raises(TooLarge):
        field_new(512)


@given(st.sampled_from([2, 3, 4, 5]), st.integers(1, 6), st.data())
def test_rank_roundtrip(q, k, data):
    rank = data.draw(st.integers(0, q**k - 1))
    d = rank_to_digits(rank, q, k)
    assert digits_to_rank(d, q) == rank
    F = field_new(q)
    assert Word.from_rank(F, k, rank).rank == rank


def test_parse_is_leftmost_first():
    F = field_new(2)
    w = Word.parse(F, "0110")
    assert w.digits == (0, 1, 1, 0)
    assert w.rank == 2 + 4
    assert support(w) == frozenset({2, 3})
    assert weight(w) == 2
    assert str(w) == "0110"


def test_space_digits_rows_match_ranks():
    D = space_digits(3, 3)
    assert D.shape == (27, 3)
    for r in range(27):
        assert tuple(D[r]) == rank_to_digits(r, 3, 3)


def test_check_space_cap(monkeypatch):
    monkeypatch.setenv("FCPC_CAP", "100")
    with pytest.raises(SpaceTooLarge):
        check_space(2, 7)
    assert check_space(2, 6) == 64


@settings(max_examples=30)
@given(st.sampled_from([2, 3, 4]), st.integers(1, 5), st.integers(0, 3), st.data())
def test_ball_ranks_oracle(q, k, radius, data):
    F = field_new(q)
    centre = data.draw(st.integers(0, q**k - 1))
    got = ball_ranks(F, k, radius, np.array([centre]))[0]
    assert got[0] == centre
    c = Word.from_rank(F, k, centre)
    want = sorted(r for r in range(q**k) if hamming_distance(c, Word.from_rank(F, k, r)) <= radius)
    assert sorted(got.tolist()) == want
