"""Partition graph, full-size clique search and the closed-form clique families."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgs, SearchBudgetExceeded
from .gf import Field, Word, ball_ranks, check_space, hamming_distance, space_digits
from .metrics import _bfs, _neighbour_steps, block_distance_matrix
from .partitions import (
    ExplicitPartition,
    GroupedWeightPartition,
    Subspace,
    coordinate_subspace,
)

DEFAULT_MAX_BLOCKS = 16
DEFAULT_NODE_BUDGET = 10**6


@dataclass(frozen=True)
class Clique:
    vertices: tuple[Word, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def ranks(self) -> list[int]:
        return [v.rank for v in self.vertices]

    def to_json(self) -> dict:
        return {"size": self.size, "vertices": [list(v.digits) for v in self.vertices]}

    @classmethod
    def from_json(cls, field: Field, obj: dict) -> "Clique":
        verts = tuple(Word(field, tuple(v)) for v in obj["vertices"])
        if "size" in obj and obj["size"] != len(verts):
            raise InvalidArgs("clique size field disagrees with vertex count")
        return cls(verts)

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(self.vertices)


@dataclass(frozen=True)
class ConditionFails:
    """The sufficient condition of a closed-form construction does not hold.

    This says nothing about whether a clique exists.
    """

    reason: str

    def __bool__(self):
        return False


class PartitionGraph:
    """E-partite graph on F_q^k: u ~ v iff distinct blocks and d(u,v) equals their block distance."""

    def __init__(self, P: ExplicitPartition):
        self.P = P
        self.D = block_distance_matrix(P)
        self._digits = space_digits(P.q, P.k)

    def adjacent(self, u: Word | int, v: Word | int) -> bool:
        a = u.rank if isinstance(u, Word) else int(u)
        b = v.rank if isinstance(v, Word) else int(v)
        i, j = self.P.block_of[a], self.P.block_of[b]
        if i == j:
            return False
        d = int(np.count_nonzero(self._digits[a] != self._digits[b]))
        return d == self.D[i, j]

    def is_clique(self, vertices: Iterable[Word | int]) -> bool:
        vs = list(vertices)
        return all(self.adjacent(a, b) for a, b in combinations(vs, 2))

    def is_full_clique(self, vertices: Iterable[Word | int]) -> bool:
        vs = [v.rank if isinstance(v, Word) else int(v) for v in vertices]
        blocks = sorted(self.P.block_of[vs].tolist())
        return blocks == list(range(self.P.E)) and self.is_clique(vs)

    def edges(self):
        """All edges as rank pairs (small spaces only)."""
        n = self.P.size
        for a in range(n):
            for b in range(a + 1, n):
                if self.adjacent(a, b):
                    yield a, b

    def to_dot(self, max_vertices: int = 256) -> str:
        P = self.P
        if P.size > max_vertices:
            raise InvalidArgs(f"DOT export limited to {max_vertices} vertices, got {P.size}")
        names = [str(Word.from_rank(P.field, P.k, r)) for r in range(P.size)]
        lines = ["graph partition {", "  node [shape=circle];"]
        for b, block in enumerate(P.blocks()):
            lines.append(f"  subgraph cluster_{b} {{ label=\"P{b}\";")
            lines.extend(f"    \"{names[r]}\";" for r in block.tolist())
            lines.append("  }")
        lines.extend(f"  \"{names[a]}\" -- \"{names[b]}\";" for a, b in self.edges())
        lines.append("}")
        return "\n".join(lines) + "\n"


def _to_clique(field: Field, k: int, ranks: Iterable[int]) -> Clique:
    return Clique(tuple(Word.from_rank(field, k, int(r)) for r in ranks))


def find_full_clique(P: ExplicitPartition, max_blocks: int = DEFAULT_MAX_BLOCKS,
                     budget: int = DEFAULT_NODE_BUDGET) -> Clique | None:
    """Lexicographically least full-size clique (by sorted ranks), or None.

    None is an exhaustive proof that no full-size clique exists.  Running past
    ``max_blocks`` or the node ``budget`` raises SearchBudgetExceeded instead.
    """
    E = P.E
    if E > max_blocks:
        raise SearchBudgetExceeded(f"E={E} exceeds the clique-search cap {max_blocks}")
    if E == 1:
        return _to_clique(P.field, P.k, [0])
    digits = space_digits(P.q, P.k)
    D = block_distance_matrix(P)

    # distance from every word to every block
    steps = _neighbour_steps(P.field, P.k)
    to_block = np.stack([_bfs(P.field, P.k, b, steps=steps) for b in P.blocks()], axis=1)
    # a vertex must realize its block distance to every other block
    realizes = to_block == D[P.block_of]
    cands = [b[realizes[b].all(axis=1)] for b in P.blocks()]
    if any(len(c) == 0 for c in cands):
        return None

    nodes = 0
    chosen: list[int] = []

    def extend(pool: list[np.ndarray | None], last: int) -> list[int] | None:
        nonlocal nodes
        open_blocks = [b for b in range(E) if pool[b] is not None]
        if not open_blocks:
            return list(chosen)
        merged = np.concatenate([pool[b] for b in open_blocks])
        owner = np.concatenate([np.full(len(pool[b]), b) for b in open_blocks])
        order = np.argsort(merged, kind="stable")
        for v, b in zip(merged[order].tolist(), owner[order].tolist()):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"clique search exceeded {budget} nodes")
            nxt: list[np.ndarray | None] = [None] * E
            ok = True
            for c in open_blocks:
                if c == b:
                    continue
                C = pool[c]
                C = C[C > v]
                C = C[np.count_nonzero(digits[C] != digits[v], axis=1) == D[b, c]]
                if len(C) == 0:
                    ok = False
                    break
                nxt[c] = C
            if not ok:
                continue
            chosen.append(v)
            found = extend(nxt, v)
            if found is not None:
                return found
            chosen.pop()
        return None

    found = extend(list(cands), -1)
    if found is None:
        return None
    return _to_clique(P.field, P.k, sorted(found))


def weight_clique(field: Field, k: int, a: int = 1) -> Clique:
    if not 0 < a < field.q:
        raise InvalidArgs("a must be a nonzero field element")
    return Clique(tuple(Word(field, (a,) * i + (0,) * (k - i)) for i in range(k + 1)))


def support_clique(field: Field, k: int, a: int = 1) -> Clique:
    """One word per support set: a on A, 0 elsewhere; listed in rank order."""
    if not 0 < a < field.q:
        raise InvalidArgs("a must be a nonzero field element")
    words = [Word(field, tuple(a if (mask >> i) & 1 else 0 for i in range(k))) for mask in range(1 << k)]
    return Clique(tuple(sorted(words, key=lambda w: w.rank)))


def coset_clique(V: Subspace) -> Clique | ConditionFails:
    """Clique of size q^l for the coset partition of V when the unit vectors hit exactly l cosets."""
    field, k = V.field, V.k
    ell = k - V.dim
    reps: dict[tuple[int, ...], int] = {}
    for i in range(k):
        e = np.zeros(k, dtype=np.int64)
        e[i] = 1
        rep = tuple(V.reduce(e).tolist())
        if any(rep):
            reps.setdefault(rep, i)
    if len(reps) != ell:
        return ConditionFails(f"unit vectors meet {len(reps)} nonzero cosets, need {ell}")
    t = sorted(reps.values())
    coeffs = space_digits(field.q, ell).astype(np.int64) if ell else np.zeros((1, 0), dtype=np.int64)
    words = np.zeros((len(coeffs), k), dtype=np.int64)
    words[:, t] = coeffs
    cl = [Word(field, tuple(int(x) for x in row)) for row in words]
    return Clique(tuple(sorted(cl, key=lambda w: w.rank)))


def coordinate_clique(field: Field, k: int, J: Iterable[int]) -> Clique:
    """All words supported inside J; a full clique of the coordinate partition."""
    out = coset_clique(coordinate_subspace(field, k, J))
    assert isinstance(out, Clique)
    return out


def is_locally_bounded(P, rho: int, lam: int, field: Field | None = None) -> bool:
    """True iff every radius-rho ball meets at most lam blocks."""
    if rho < 0 or lam < 0:
        raise InvalidArgs("rho and lambda must be nonnegative")
    if isinstance(P, GroupedWeightPartition):
        # a radius-rho ball around weight w reaches exactly the weights within rho of w
        # (0..k clipped), for any alphabet size
        k = P.k
        for w in range(k + 1):
            lo, hi = max(0, w - rho), min(k, w + rho)
            if len(set(P.group_of[lo : hi + 1].tolist())) > lam:
                return False
        return True
    check_space(P.q, P.k)
    if rho == 0:
        return lam >= 1
    n = P.size
    chunk = max(1, (1 << 20) // max(1, _ball_size(P.q, P.k, rho)))
    for start in range(0, n, chunk):
        ranks = np.arange(start, min(n, start + chunk))
        labs = np.sort(P.block_of[ball_ranks(P.field, P.k, rho, ranks)], axis=1)
        distinct = 1 + np.count_nonzero(np.diff(labs, axis=1), axis=1)
        if (distinct > lam).any():
            return False
    return True


def _ball_size(q: int, k: int, rho: int) -> int:
    from math import comb

    return sum(comb(k, i) * (q - 1) ** i for i in range(min(rho, k) + 1))


def check_clique_distances(clique: Sequence[Word]) -> np.ndarray:
    """Pairwise Hamming distances of the clique vertices."""
    n = len(clique)
    out = np.zeros((n, n), dtype=np.int64)
    for i, j in combinations(range(n), 2):
        out[i, j] = out[j, i] = hamming_distance(clique[i], clique[j])
    return out
