"""Block-preserving contractions: representation, verification, constructions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgs, NotFullSize
from .gf import Field, Word, digits_to_ranks, space_digits
from .kernels import backend
from .partitions import ExplicitPartition, GroupedWeightPartition, Subspace, _check_index_set
from .pgraph import Clique, ConditionFails

EXHAUSTIVE_CAP = 1 << 11
DEFAULT_SAMPLES = 200_000


@dataclass(frozen=True, eq=False)
class Contraction:
    """(U, phi) with phi stored densely or as a rule.

    kind "dense": ``index[rank]`` is the position in U of phi(rank).
    kind "weight": phi(x) = 1^wt(x) 0^(k-wt(x)); U lists those k+1 words.
    kind "mask":   phi(x) keeps the coordinates in J and zeroes the rest.
    """

    field: Field
    k: int
    kind: str
    U: tuple[int, ...] | None = None  # ranks; None for a mask rule too large to list
    index: np.ndarray | None = None
    J: tuple[int, ...] | None = None

    @property
    def size(self) -> int:
        if self.kind == "mask":
            return self.field.q ** len(self.J)
        if self.kind == "weight":
            return self.k + 1
        return len(self.U)

    def U_words(self) -> list[Word]:
        return [Word.from_rank(self.field, self.k, r) for r in self.U]

    def apply(self, digits: np.ndarray) -> np.ndarray:
        """Image digit rows of the given digit rows."""
        digits = np.asarray(digits)
        if self.kind == "dense":
            ranks = digits_to_ranks(digits, self.field.q)
            U = np.asarray(self.U, dtype=np.int64)
            img = U[self.index[ranks]]
            q, k = self.field.q, self.k
            return np.stack([(img // q**i) % q for i in range(k)], axis=-1).astype(digits.dtype)
        if self.kind == "weight":
            w = np.count_nonzero(digits, axis=-1)
            return (np.arange(self.k)[None, :] < w[:, None]).astype(digits.dtype)
        if self.kind == "mask":
            out = np.zeros_like(digits)
            cols = [j - 1 for j in self.J]
            out[..., cols] = digits[..., cols]
            return out
        raise InvalidArgs(f"unknown contraction kind {self.kind!r}")

    def image_rank(self, rank: int) -> int:
        d = np.array([Word.from_rank(self.field, self.k, rank).digits])
        return int(digits_to_ranks(self.apply(d), self.field.q)[0])

    def image_ranks(self) -> np.ndarray:
        """phi over the whole space, as ranks."""
        digits = space_digits(self.field.q, self.k)
        return digits_to_ranks(self.apply(digits), self.field.q)

    def to_json(self) -> dict:
        if self.kind == "dense":
            phi = {"kind": "dense", "map": self.index.tolist()}
        elif self.kind == "weight":
            phi = {"kind": "weight"}
        else:
            phi = {"kind": "mask", "J": list(self.J)}
        out = {"field": self.field.to_json(), "k": self.k, "phi": phi}
        if self.U is not None:
            out["U"] = list(self.U)
        return out

    @classmethod
    def from_json(cls, field: Field, k: int, obj: dict) -> "Contraction":
        phi = obj["phi"]
        if phi["kind"] == "dense":
            return cls(field, k, "dense", tuple(int(u) for u in obj["U"]),
                       _frozen(np.asarray(phi["map"], dtype=np.int64)))
        if phi["kind"] == "weight":
            return weight_contraction(field, k)
        if phi["kind"] == "mask":
            return mask_contraction(field, k, phi["J"])
        raise InvalidArgs(f"unknown phi kind {phi['kind']!r}")


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def dense_contraction(field: Field, k: int, U: Sequence[int], images: Sequence[int]) -> Contraction:
    """From an image rank per word; every image must lie in U."""
    U = tuple(int(u) for u in U)
    pos = {u: i for i, u in enumerate(U)}
    if len(pos) != len(U):
        raise InvalidArgs("U has repeated words")
    images = np.asarray(images, dtype=np.int64)
    if len(images) != field.q**k:
        raise InvalidArgs(f"phi needs one image per word ({field.q**k}), got {len(images)}")
    try:
        index = np.array([pos[int(v)] for v in images], dtype=np.int64)
    except KeyError as exc:
        raise InvalidArgs(f"phi maps into rank {exc.args[0]}, which is not in U") from None
    return Contraction(field, k, "dense", U, _frozen(index))


def weight_contraction(field: Field, k: int) -> Contraction:
    U = tuple(sum(field.q**j for j in range(i)) for i in range(k + 1))
    return Contraction(field, k, "weight", U)


def mask_contraction(field: Field, k: int, J) -> Contraction:
    J = _check_index_set(k, J)
    U = None
    if field.q ** len(J) <= 1 << 16:
        from itertools import product

        cols = [j - 1 for j in J]
        U = tuple(sorted(sum(v * field.q**c for v, c in zip(vals, cols))
                         for vals in product(range(field.q), repeat=len(J))))
    return Contraction(field, k, "mask", U, J=J)


def coset_contraction(V: Subspace, J) -> Contraction | ConditionFails:
    """(S_J, phi_J) when every word supported off J lies in V."""
    J = _check_index_set(V.k, J)
    off = [i for i in range(1, V.k + 1) if i not in J]
    for i in off:
        e = np.zeros(V.k, dtype=np.int64)
        e[i - 1] = 1
        if not V.contains(e):
            return ConditionFails(f"e_{i} is not in V, so S_[k]\\J is not contained in V")
    return mask_contraction(V.field, V.k, J)


def clique_to_contraction(P: ExplicitPartition, clique: Clique | Sequence[Word]) -> Contraction:
    """Map every word to its block's clique vertex; U is listed in block order."""
    verts = list(clique)
    blocks = [P.block_of_word(v) for v in verts]
    if sorted(blocks) != list(range(P.E)):
        raise NotFullSize(f"need exactly one vertex per block ({P.E}), got blocks {sorted(blocks)}")
    U = [0] * P.E
    for v, b in zip(verts, blocks):
        U[b] = v.rank
    return Contraction(P.field, P.k, "dense", tuple(U), _frozen(P.block_of.copy()))


# ----------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class ContractionCheck:
    ok: bool
    reason: str | None = None  # "block" | "identity" | "distance"
    witness: tuple[int, ...] | None = None  # ranks (one for block/identity, two for distance)
    exhaustive: bool = True
    samples: int = 0

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            how = "exhaustively" if self.exhaustive else f"on {self.samples} sampled pairs"
            return f"verified {how}"
        return f"fails ({self.reason}) at {self.witness}"


def block_labels(P, digits: np.ndarray) -> np.ndarray:
    """Block id of each digit row under an explicit or grouped-weight partition."""
    if isinstance(P, GroupedWeightPartition):
        return P.group_of[np.count_nonzero(digits, axis=-1)]
    return P.block_of[digits_to_ranks(digits, P.q)]


def verify_contraction(P, C: Contraction, exhaustive_cap: int = EXHAUSTIVE_CAP,
                       samples: int = DEFAULT_SAMPLES, seed: int = 0) -> ContractionCheck:
    q, k = C.field.q, C.k
    if isinstance(P, ExplicitPartition) and (P.field != C.field or P.k != k):
        raise InvalidArgs("contraction and partition live in different spaces")
    n = q**k
    if n <= exhaustive_cap:
        digits = space_digits(q, k)
        image = digits_to_ranks(C.apply(digits), q)
        return _check_rows(P, C, digits, image, np.arange(n), exhaustive=True)
    # sampled regime: random words for block/identity, random pairs for distance
    rng = np.random.default_rng(seed)
    x = rng.integers(0, q, size=(samples, k), dtype=np.int64)
    y = rng.integers(0, q, size=(samples, k), dtype=np.int64)
    # bias half the pairs toward small distances, where violations live
    half = samples // 2
    flips = rng.random((half, k)) < (2.0 / max(k, 1))
    y[:half] = np.where(flips, rng.integers(0, q, size=(half, k)), x[:half])
    lx, ly = block_labels(P, x), block_labels(P, y)
    fx, fy = C.apply(x), C.apply(y)
    bad = np.nonzero(block_labels(P, fx) != lx)[0]
    if len(bad):
        return ContractionCheck(False, "block", (_rank(x[bad[0]], q),), False, samples)
    if C.U is not None and len(C.U) <= exhaustive_cap:
        Ud = np.array([Word.from_rank(C.field, k, u).digits for u in C.U], dtype=np.int64)
        moved = np.nonzero((C.apply(Ud) != Ud).any(axis=1))[0]
        if len(moved):
            return ContractionCheck(False, "identity", (C.U[moved[0]],), False, samples)
    d = np.count_nonzero(x != y, axis=1)
    dphi = np.count_nonzero(fx != fy, axis=1)
    bad = np.nonzero((lx != ly) & (dphi > d))[0]
    if len(bad):
        i = bad[0]
        return ContractionCheck(False, "distance", (_rank(x[i], q), _rank(y[i], q)), False, samples)
    return ContractionCheck(True, exhaustive=False, samples=samples)


def _rank(row, q) -> int:
    return int(digits_to_ranks(np.asarray(row)[None, :], q)[0])


def _check_rows(P, C, digits, image, ranks, exhaustive) -> ContractionCheck:
    labels = block_labels(P, digits)
    bad = np.nonzero(labels[image] != labels)[0]
    if len(bad):
        return ContractionCheck(False, "block", (int(ranks[bad[0]]),), exhaustive)
    if C.U is not None:
        U = np.asarray(C.U, dtype=np.int64)
        moved = np.nonzero(image[U] != U)[0]
        if len(moved):
            return ContractionCheck(False, "identity", (int(U[moved[0]]),), exhaustive)
    hit = backend().scan_contraction(np.ascontiguousarray(digits), np.ascontiguousarray(image),
                                     np.ascontiguousarray(labels, dtype=np.int64))
    if hit is not None:
        return ContractionCheck(False, "distance", (int(ranks[hit[0]]), int(ranks[hit[1]])), exhaustive)
    return ContractionCheck(True, exhaustive=exhaustive)

