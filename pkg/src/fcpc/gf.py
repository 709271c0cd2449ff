"""GF(q) arithmetic and word-level operations over F_q^k.

Field elements are small integers in ``[0, q)``.  For an extension field
GF(p^m) the integer ``sum(c_i * p**i)`` encodes the polynomial
``sum(c_i * x**i)`` reduced modulo a fixed irreducible polynomial, so ``0``
and ``1`` are always the additive and multiplicative identities.

A word of F_q^k is a length-k digit sequence; its rank is the little-endian
base-q integer ``sum(digits[i] * q**i)``.  Bulk code paths work on ranks and
on the cached ``(q**k, k)`` digit table returned by :func:`space_digits`.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotAPrimePower, SpaceTooLarge, TooLarge

MAX_Q = 256
DEFAULT_CAP = 1 << 22

# Little-endian coefficients, leading 1 last.  The first six are fixed by
# convention; the rest are Conway polynomials.
IRREDUCIBLE = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (1, 0, 1),
    16: (1, 1, 0, 0, 1),
    25: (2, 1, 1),
    27: (1, 2, 0, 1),
    32: (1, 0, 1, 0, 0, 1),
    49: (3, 6, 1),
    64: (1, 1, 0, 1, 1, 0, 1),
    81: (2, 0, 0, 2, 1),
    121: (2, 7, 1),
    125: (3, 3, 0, 1),
    128: (1, 1, 0, 0, 0, 0, 0, 1),
    169: (2, 12, 1),
    243: (1, 2, 0, 0, 0, 1),
    256: (1, 0, 1, 1, 1, 0, 0, 0, 1),
}


def space_cap() -> int:
    """Largest explicit space size q**k; ``FCPC_CAP`` overrides the default."""
    env = os.environ.get("FCPC_CAP")
    return int(env) if env else DEFAULT_CAP


def prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise NotAPrimePower(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise NotAPrimePower(f"q={q} has at least two distinct prime factors")
    return p, m


def _poly_mul_table(p: int, m: int, modulus: Sequence[int]) -> np.ndarray:
    q = p**m
    coeffs = np.array([[(a // p**i) % p for i in range(m)] for a in range(q)], dtype=np.int64)
    powers = p ** np.arange(m, dtype=np.int64)
    table = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        prod = np.zeros((q, 2 * m - 1), dtype=np.int64)
        for i in range(m):
            if coeffs[a, i]:
                prod[:, i : i + m] += coeffs[a, i] * coeffs
        prod %= p
        # reduce from the top degree down; modulus is monic
        for deg in range(2 * m - 2, m - 1, -1):
            lead = prod[:, deg].copy()
            for i in range(m):
                prod[:, deg - m + i] -= lead * modulus[i]
            prod[:, deg] = 0
            prod %= p
        table[a] = prod[:, :m] @ powers
    return table


@dataclass(frozen=True, eq=False)
class Field:
    """Immutable GF(q) with dense operation tables (q <= 256)."""

    q: int
    p: int
    m: int
    modulus: tuple[int, ...]
    add: np.ndarray
    sub: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray
    exp_table: np.ndarray
    log_table: np.ndarray

    def __eq__(self, other):
        return isinstance(other, Field) and (self.q, self.modulus) == (other.q, other.modulus)

    def __hash__(self):
        return hash((self.q, self.modulus))

    def __repr__(self):
        return f"GF({self.q})"

    def elements(self) -> range:
        return range(self.q)

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.q)
        return int(self.mul[a, self.inv[b]])

    def to_json(self) -> dict:
        if self.m == 1:
            return {"q": self.q}
        return {"q": self.q, "modulus": list(self.modulus)}


@functools.lru_cache(maxsize=None)
def field_new(q: int) -> Field:
    if q > MAX_Q:
        raise TooLarge(f"q={q} exceeds the supported maximum {MAX_Q}")
    p, m = prime_power(q)
    if m == 1:
        r = np.arange(q, dtype=np.int64)
        add = (r[:, None] + r[None, :]) % q
        mul = (r[:, None] * r[None, :]) % q
        modulus = ()
    else:
        modulus = IRREDUCIBLE[q]
        digits = np.array([[(a // p**i) % p for i in range(m)] for a in range(q)], dtype=np.int64)
        powers = p ** np.arange(m, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ powers
        mul = _poly_mul_table(p, m, modulus)
    neg = np.argmin(add, axis=1)  # add[a, neg[a]] == 0 is the unique zero in the row
    sub = add[:, neg]
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        hits = np.nonzero(mul[a] == 1)[0]
        if len(hits) != 1:
            raise ValueError(f"modulus {modulus} is not irreducible for GF({q})")
        inv[a] = hits[0]
    exp_table, log_table = _exp_log(q, mul)
    tabs = [t.astype(np.int64) for t in (add, sub, mul, neg, inv, exp_table, log_table)]
    for t in tabs:
        t.setflags(write=False)
    return Field(q, p, m, tuple(modulus), *tabs)


def _exp_log(q: int, mul: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if q == 2:
        return np.array([1]), np.array([0, 0])
    for g in range(2, q):
        exp = [1]
        x = g
        while x != 1:
            exp.append(x)
            x = int(mul[x, g])
        if len(exp) == q - 1:
            log = np.zeros(q, dtype=np.int64)
            log[exp] = np.arange(q - 1)
            return np.array(exp), log
    raise AssertionError("no primitive element found")


# ----------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class Word:
    field: Field
    digits: tuple[int, ...]

    def __post_init__(self):
        q = self.field.q
        if any(not 0 <= d < q for d in self.digits):
            raise ValueError(f"digits {self.digits} out of range for GF({q})")

    @property
    def k(self) -> int:
        return len(self.digits)

    @property
    def rank(self) -> int:
        return digits_to_rank(self.digits, self.field.q)

    @classmethod
    def from_rank(cls, field: Field, k: int, rank: int) -> "Word":
        return cls(field, rank_to_digits(rank, field.q, k))

    @classmethod
    def parse(cls, field: Field, text: str) -> "Word":
        """Parse concatenated notation such as ``"0110"`` (leftmost = index 1)."""
        return cls(field, tuple(int(c, 36) for c in text))

    def __str__(self):
        if self.field.q <= 10:
            return "".join(str(d) for d in self.digits)
        return "(" + ",".join(str(d) for d in self.digits) + ")"

    def __sub__(self, other: "Word") -> "Word":
        _same_space(self, other)
        s = self.field.sub
        return Word(self.field, tuple(int(s[a, b]) for a, b in zip(self.digits, other.digits)))


def _same_space(u: Word, v: Word) -> None:
    if u.field != v.field or u.k != v.k:
        raise DimensionMismatch(f"words live in different spaces: {u.field}^{u.k} vs {v.field}^{v.k}")


def rank_to_digits(rank: int, q: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        rank, d = divmod(rank, q)
        out.append(d)
    return tuple(out)


def digits_to_rank(digits: Iterable[int], q: int) -> int:
    rank, scale = 0, 1
    for d in digits:
        rank += int(d) * scale
        scale *= q
    return rank


def hamming_distance(u: Word, v: Word) -> int:
    _same_space(u, v)
    return sum(a != b for a, b in zip(u.digits, v.digits))


def weight(u: Word) -> int:
    return sum(d != 0 for d in u.digits)


def support(u: Word) -> frozenset[int]:
    """Nonzero positions, 1-based."""
    return frozenset(i + 1 for i, d in enumerate(u.digits) if d)


# ----------------------------------------------------------------------------
# bulk helpers over the whole space


def check_space(q: int, k: int) -> int:
    n = q**k
    if n > space_cap():
        raise SpaceTooLarge(f"q^k = {q}^{k} exceeds the explicit cap {space_cap()}")
    return n


@functools.lru_cache(maxsize=32)
def space_digits(q: int, k: int) -> np.ndarray:
    """Read-only ``(q**k, k)`` uint8 table; row r holds the digits of rank r."""
    n = check_space(q, k)
    ranks = np.arange(n, dtype=np.int64)
    out = np.empty((n, k), dtype=np.uint8)
    for i in range(k):
        out[:, i] = (ranks // q**i) % q
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=32)
def space_weights(q: int, k: int) -> np.ndarray:
    w = np.count_nonzero(space_digits(q, k), axis=1).astype(np.int64)
    w.setflags(write=False)
    return w


def digits_to_ranks(digits: np.ndarray, q: int) -> np.ndarray:
    k = digits.shape[-1]
    powers = q ** np.arange(k, dtype=np.int64)
    return digits.astype(np.int64) @ powers


def pairwise_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamming distances between rows of two digit tables."""
    return (a[:, None, :] != b[None, :, :]).sum(axis=2)


def ball_offsets(field: Field, k: int, radius: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Error patterns of weight 1..radius as (positions, nonzero values)."""
    from itertools import combinations, product

    out = []
    for w in range(1, min(radius, k) + 1):
        for pos in combinations(range(k), w):
            for vals in product(range(1, field.q), repeat=w):
                out.append((pos, vals))
    return out


def ball_ranks(field: Field, k: int, radius: int, ranks: np.ndarray | None = None) -> np.ndarray:
    """Ranks of every word within ``radius`` of each centre.

    Returns an array of shape ``(len(ranks), ball_size)``; column 0 is the
    centre itself.
    """
    q = field.q
    digits = space_digits(q, k)
    if ranks is None:
        ranks = np.arange(q**k, dtype=np.int64)
    centre = digits[ranks].astype(np.int64)
    cols = [np.asarray(ranks, dtype=np.int64)]
    add = field.add
    for pos, vals in ball_offsets(field, k, radius):
        moved = centre.copy()
        for i, v in zip(pos, vals):
            moved[:, i] = add[moved[:, i], v]
        cols.append(digits_to_ranks(moved, q))
    return np.stack(cols, axis=1)
