"""Partitions of F_q^k: explicit labelings, grouped-weight forms, cosets, joins."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidArgs, InvalidGroups
from .gf import Field, Word, check_space, digits_to_ranks, space_digits, space_weights


def canonical_labels(labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Relabel so block ids follow first occurrence; also return the first index of each block."""
    uniq, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    remap = np.empty(len(uniq), dtype=np.int64)
    remap[order] = np.arange(len(uniq))
    return remap[inverse.reshape(-1)], first[order]


class ExplicitPartition:
    """A total labeling ``block_of[rank] -> block id`` of all q**k words.

    Block ids are canonical: block 0 holds rank 0, and ids increase in order of
    each block's smallest rank.  ``origin`` optionally records the structured
    family the partition came from (coset, support, coordinate, grouped) so
    later stages can use closed-form constructions.
    """

    def __init__(self, field: Field, k: int, block_of, labels: Sequence[Any] | None = None,
                 origin: tuple | None = None):
        n = check_space(field.q, k)
        raw = np.asarray(block_of).reshape(-1)
        if raw.shape != (n,):
            raise InvalidArgs(f"block_of has length {raw.shape[0]}, expected {n}")
        canon, first = canonical_labels(raw)
        canon = canon.astype(np.int64)
        canon.setflags(write=False)
        self.field = field
        self.k = k
        self.block_of = canon
        self.E = len(first)
        if labels is not None:
            labels = list(labels)
            if len(labels) != self.E:
                raise InvalidArgs("one label per block required")
        self.block_labels = labels
        self.origin = origin
        self._blocks = None

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def size(self) -> int:
        return len(self.block_of)

    def blocks(self) -> list[np.ndarray]:
        """Sorted rank arrays, one per block, indexed by block id."""
        if self._blocks is None:
            order = np.argsort(self.block_of, kind="stable")
            cuts = np.cumsum(np.bincount(self.block_of, minlength=self.E))[:-1]
            self._blocks = np.split(order, cuts)
        return self._blocks

    def block_sizes(self) -> list[int]:
        return np.bincount(self.block_of, minlength=self.E).tolist()

    def block_of_word(self, u: Word) -> int:
        return int(self.block_of[u.rank])

    def as_sets(self) -> list[frozenset[int]]:
        return [frozenset(b.tolist()) for b in self.blocks()]

    def __eq__(self, other):
        return (isinstance(other, ExplicitPartition) and self.field == other.field
                and self.k == other.k and np.array_equal(self.block_of, other.block_of))

    def __hash__(self):
        return hash((self.field, self.k, self.block_of.tobytes()))

    def __repr__(self):
        return f"ExplicitPartition(GF({self.q})^{self.k}, E={self.E})"


def _check_same(P: ExplicitPartition, Q: ExplicitPartition) -> None:
    if P.field != Q.field or P.k != Q.k:
        raise DimensionMismatch(f"partitions of different spaces: {P!r} vs {Q!r}")


def from_function(field: Field, k: int, f: Callable[[Word], Hashable]) -> ExplicitPartition:
    n = check_space(field.q, k)
    digits = space_digits(field.q, k)
    index: dict[Hashable, int] = {}
    labels = np.empty(n, dtype=np.int64)
    for r in range(n):
        value = f(Word(field, tuple(int(d) for d in digits[r])))
        labels[r] = index.setdefault(value, len(index))
    return ExplicitPartition(field, k, labels, labels=list(index))


def finest(field: Field, k: int) -> ExplicitPartition:
    return ExplicitPartition(field, k, np.arange(check_space(field.q, k)))


def trivial(field: Field, k: int) -> ExplicitPartition:
    return ExplicitPartition(field, k, np.zeros(check_space(field.q, k), dtype=np.int64))


def from_blocks(field: Field, k: int, blocks: Iterable[Iterable[int]]) -> ExplicitPartition:
    """Build from explicit rank sets; every rank must appear exactly once."""
    n = check_space(field.q, k)
    labels = np.full(n, -1, dtype=np.int64)
    for i, block in enumerate(blocks):
        idx = np.fromiter(block, dtype=np.int64)
        if len(idx) == 0:
            raise InvalidArgs("empty block")
        if (labels[idx] != -1).any():
            raise InvalidArgs("blocks overlap")
        labels[idx] = i
    if (labels == -1).any():
        raise InvalidArgs("blocks do not cover the space")
    return ExplicitPartition(field, k, labels)


def join(P: ExplicitPartition, Q: ExplicitPartition) -> ExplicitPartition:
    _check_same(P, Q)
    return ExplicitPartition(P.field, P.k, P.block_of * Q.E + Q.block_of)


def join_all(parts: Sequence[ExplicitPartition]) -> ExplicitPartition:
    out = parts[0]
    for P in parts[1:]:
        out = join(out, P)
    return out


def is_refinement(Q: ExplicitPartition, P: ExplicitPartition) -> bool:
    """True iff every block of Q lies inside a block of P."""
    _check_same(P, Q)
    pairs = np.unique(Q.block_of * P.E + P.block_of)
    return len(pairs) == Q.E


# ----------------------------------------------------------------------------
# linear algebra over GF(q)


def rref(field: Field, rows) -> tuple[np.ndarray, list[int]]:
    """Row-reduced echelon form with unit pivots; zero rows dropped."""
    A = np.array(rows, dtype=np.int64).reshape(len(rows), -1) if len(rows) else np.zeros((0, 0), dtype=np.int64)
    if A.size == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else 0), []
    add, mul, inv, neg = field.add, field.mul, field.inv, field.neg
    A = A.copy()
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        p = r + nz[0]
        A[[r, p]] = A[[p, r]]
        A[r] = mul[inv[A[r, c]], A[r]]
        for i in range(nrows):
            if i != r and A[i, c]:
                A[i] = add[A[i], mul[neg[A[i, c]], A[r]]]
        pivots.append(c)
        r += 1
    return A[:r], pivots


@dataclass(frozen=True, eq=False)
class Subspace:
    field: Field
    k: int
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...] = dc_field(default=())

    @classmethod
    def span(cls, field: Field, k: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        rows = [tuple(int(x) for x in v) for v in vectors]
        for v in rows:
            if len(v) != k:
                raise DimensionMismatch(f"vector of length {len(v)} in a space of dimension {k}")
        if not rows:
            return cls(field, k, (), ())
        R, piv = rref(field, rows)
        return cls(field, k, tuple(tuple(int(x) for x in row) for row in R), tuple(piv))

    @classmethod
    def whole(cls, field: Field, k: int) -> "Subspace":
        return cls.span(field, k, np.eye(k, dtype=np.int64))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.dim, self.k)

    def reduce(self, digits: np.ndarray) -> np.ndarray:
        """Canonical coset representative of each row (pivot coordinates zeroed)."""
        add, mul, neg = self.field.add, self.field.mul, self.field.neg
        x = np.array(digits, dtype=np.int64, copy=True)
        single = x.ndim == 1
        x = x.reshape(-1, self.k)
        B = self.basis_matrix()
        for row, c in zip(B, self.pivots):
            coef = neg[x[:, c]]
            x = add[x, mul[coef[:, None], row[None, :]]]
        return x[0] if single else x

    def contains(self, v: Sequence[int]) -> bool:
        return not np.any(self.reduce(np.asarray(v)))

    def elements(self) -> np.ndarray:
        """Sorted ranks of all q**dim members."""
        q = self.field.q
        check_space(q, self.dim)
        coeffs = space_digits(q, self.dim).astype(np.int64)
        acc = np.zeros((len(coeffs), self.k), dtype=np.int64)
        add, mul = self.field.add, self.field.mul
        for i, row in enumerate(self.basis_matrix()):
            acc = add[acc, mul[coeffs[:, i][:, None], row[None, :]]]
        return np.sort(digits_to_ranks(acc, q))

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field and self.k == other.k
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.field, self.k, self.basis))

    def __repr__(self):
        return f"Subspace(GF({self.field.q})^{self.k}, dim={self.dim})"


def kernel_of_linear(field: Field, matrix) -> Subspace:
    A = np.array(matrix, dtype=np.int64)
    if A.ndim != 2:
        raise InvalidArgs("matrix must be two-dimensional")
    k = A.shape[1]
    R, piv = rref(field, A) if A.shape[0] else (np.zeros((0, k), dtype=np.int64), [])
    free = [c for c in range(k) if c not in piv]
    vecs = []
    for f in free:
        v = np.zeros(k, dtype=np.int64)
        v[f] = 1
        for row, c in zip(R, piv):
            v[c] = field.neg[row[f]]
        vecs.append(v)
    return Subspace.span(field, k, vecs)


def orthogonal_complement(V: Subspace) -> Subspace:
    if V.dim == 0:
        return Subspace.whole(V.field, V.k)
    return kernel_of_linear(V.field, V.basis_matrix())


def kernel_intersection(subspaces: Sequence[Subspace]) -> Subspace:
    first = subspaces[0]
    for V in subspaces[1:]:
        if V.field != first.field or V.k != first.k:
            raise DimensionMismatch("subspaces of different spaces")
    checks = [row for V in subspaces for row in orthogonal_complement(V).basis]
    if not checks:
        return Subspace.whole(first.field, first.k)
    return kernel_of_linear(first.field, np.array(checks, dtype=np.int64))


def coset_partition(V: Subspace) -> ExplicitPartition:
    q = V.field.q
    reps = V.reduce(space_digits(q, V.k))
    return ExplicitPartition(V.field, V.k, digits_to_ranks(reps, q), origin=("coset", V))


def coordinate_subspace(field: Field, k: int, J: Iterable[int]) -> Subspace:
    """The subspace {x : x_J = 0} for a 1-based index set J."""
    J = _check_index_set(k, J)
    return Subspace.span(field, k, [np.eye(k, dtype=np.int64)[i - 1] for i in range(1, k + 1) if i not in J])


def _check_index_set(k: int, J: Iterable[int]) -> tuple[int, ...]:
    J = tuple(sorted(set(int(j) for j in J)))
    if any(not 1 <= j <= k for j in J):
        raise InvalidArgs(f"index set {J} not inside [1, {k}]")
    return J


def support_partition(field: Field, k: int) -> ExplicitPartition:
    digits = space_digits(field.q, k)
    key = (digits != 0).astype(np.int64) @ (1 << np.arange(k, dtype=np.int64))
    return ExplicitPartition(field, k, key, origin=("support",))


def coordinate_partition(field: Field, k: int, J: Iterable[int]) -> ExplicitPartition:
    J = _check_index_set(k, J)
    digits = space_digits(field.q, k)
    cols = [j - 1 for j in J]
    key = digits_to_ranks(digits[:, cols], field.q) if cols else np.zeros(len(digits), dtype=np.int64)
    return ExplicitPartition(field, k, key, origin=("coordinate", J))


def function_class_size(H: int, E: int) -> int:
    """Number of functions onto a fixed E-block partition with an H-element codomain."""
    if E < 1 or H < E:
        raise InvalidArgs(f"need H >= E >= 1, got H={H}, E={E}")
    return math.perm(H, E)


# ----------------------------------------------------------------------------
# grouped weight partitions


class GroupedWeightPartition:
    """Blocks are unions of weight classes W_i; ``groups`` partition {0..k}."""

    def __init__(self, k: int, groups: Iterable[Iterable[int]]):
        gs = [tuple(sorted(set(int(i) for i in g))) for g in groups]
        if any(len(g) == 0 for g in gs):
            raise InvalidGroups("empty group")
        flat = [i for g in gs for i in g]
        if len(flat) != len(set(flat)):
            raise InvalidGroups("groups overlap")
        if sorted(flat) != list(range(k + 1)):
            raise InvalidGroups(f"groups must cover exactly 0..{k}")
        gs.sort(key=lambda g: g[0])
        self.k = k
        self.groups = tuple(gs)
        self.consecutive = all(g[-1] - g[0] + 1 == len(g) for g in gs)
        lookup = np.empty(k + 1, dtype=np.int64)
        for j, g in enumerate(gs):
            lookup[list(g)] = j
        lookup.setflags(write=False)
        self.group_of = lookup

    @property
    def E(self) -> int:
        return len(self.groups)

    def __eq__(self, other):
        return isinstance(other, GroupedWeightPartition) and (self.k, self.groups) == (other.k, other.groups)

    def __hash__(self):
        return hash((self.k, self.groups))

    def __repr__(self):
        return f"GroupedWeightPartition(k={self.k}, groups={[list(g) for g in self.groups]})"


def weight_partition(k: int) -> GroupedWeightPartition:
    return GroupedWeightPartition(k, [[i] for i in range(k + 1)])


def hwdf_partition(k: int, T: int) -> GroupedWeightPartition:
    """Domain partition of x -> floor(wt(x) / T)."""
    if T < 1:
        raise InvalidArgs("T must be at least 1")
    return GroupedWeightPartition(k, [range(s, min(s + T, k + 1)) for s in range(0, k + 1, T)])


def grouped(groups: Iterable[Iterable[int]], k: int | None = None) -> GroupedWeightPartition:
    groups = [list(g) for g in groups]
    if k is None:
        k = max(max(g) for g in groups)
    return GroupedWeightPartition(k, groups)


def join_grouped(G1: GroupedWeightPartition, G2: GroupedWeightPartition) -> GroupedWeightPartition:
    if G1.k != G2.k:
        raise DimensionMismatch(f"grouped partitions for k={G1.k} and k={G2.k}")
    key = G1.group_of * G2.E + G2.group_of
    buckets: dict[int, list[int]] = {}
    for w, kv in enumerate(key.tolist()):
        buckets.setdefault(kv, []).append(w)
    return GroupedWeightPartition(G1.k, buckets.values())


def materialize(G: GroupedWeightPartition, field: Field) -> ExplicitPartition:
    w = space_weights(field.q, G.k)
    return ExplicitPartition(field, G.k, G.group_of[w], origin=("grouped", G))


def as_explicit(P, field: Field | None = None) -> ExplicitPartition:
    if isinstance(P, ExplicitPartition):
        return P
    if isinstance(P, GroupedWeightPartition):
        if field is None:
            raise InvalidArgs("a field is needed to materialize a grouped-weight partition")
        return materialize(P, field)
    raise TypeError(f"not a partition: {P!r}")
