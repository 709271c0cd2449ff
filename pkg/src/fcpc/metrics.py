"""Block distances and the PDM / PDRM requirement matrices."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadBlockId, InvalidArgs, NotConsecutive
from .gf import Field, Word, space_digits
from .partitions import ExplicitPartition, GroupedWeightPartition

UNREACHED = np.iinfo(np.int64).max


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    entries: np.ndarray
    t: int | None = None
    role: str = "generic"  # "PDM" | "PDRM" | "generic"

    def __post_init__(self):
        D = np.array(self.entries, dtype=np.int64)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise InvalidArgs("distance matrix must be square")
        if (D < 0).any() or (D != D.T).any() or np.diag(D).any():
            raise InvalidArgs("distance matrix must be symmetric, nonnegative, zero on the diagonal")
        D.setflags(write=False)
        object.__setattr__(self, "entries", D)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, ij):
        return int(self.entries[ij])

    def __eq__(self, other):
        if isinstance(other, DistanceMatrix):
            other = other.entries
        return np.array_equal(self.entries, np.asarray(other))

    def __hash__(self):
        return hash(self.entries.tobytes())

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def upper_sum(self) -> int:
        return int(np.triu(self.entries, 1).sum())

    def to_json(self) -> dict:
        out = {"n": self.n, "entries": self.tolist()}
        if self.t is not None:
            out["t"] = self.t
        if self.role != "generic":
            out["role"] = self.role
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "DistanceMatrix":
        D = cls(np.array(obj["entries"], dtype=np.int64), obj.get("t"), obj.get("role", "generic"))
        if "n" in obj and obj["n"] != D.n:
            raise InvalidArgs(f"declared n={obj['n']} but matrix has order {D.n}")
        return D

    def to_csv(self) -> str:
        buf = io.StringIO()
        np.savetxt(buf, self.entries, fmt="%d", delimiter=",")
        return buf.getvalue()

    def permuted(self, order: Sequence[int]) -> "DistanceMatrix":
        idx = np.asarray(order)
        return DistanceMatrix(self.entries[np.ix_(idx, idx)], self.t, self.role)


def requirement(t: int, d):
    return np.maximum(2 * t + 1 - np.asarray(d, dtype=np.int64), 0)


# ----------------------------------------------------------------------------
# BFS in the Hamming graph


def _neighbour_steps(field: Field, k: int):
    """For each (position, delta) the per-rank rank increment, as a list of arrays."""
    q = field.q
    digits = space_digits(q, k).astype(np.int64)
    steps = []
    for i in range(k):
        col = digits[:, i]
        for delta in range(1, q):
            steps.append((field.add[col, delta] - col) * q**i)
    return steps


def _bfs(field: Field, k: int, sources: np.ndarray, targets_mask: np.ndarray | None = None,
         steps=None) -> np.ndarray:
    """Hamming distance from the source set to every word (early exit on target hit)."""
    n = field.q**k
    dist = np.full(n, -1, dtype=np.int64)
    dist[sources] = 0
    frontier = np.asarray(sources, dtype=np.int64)
    if targets_mask is not None and targets_mask[frontier].any():
        return dist
    if steps is None:
        steps = _neighbour_steps(field, k)
    level = 0
    while len(frontier):
        level += 1
        nxt = np.unique(np.concatenate([frontier + s[frontier] for s in steps]))
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = level
        frontier = nxt
        if targets_mask is not None and targets_mask[nxt].any():
            break
    return dist


def block_distance(P: ExplicitPartition, i: int, j: int) -> int:
    if not (0 <= i < P.E and 0 <= j < P.E):
        raise BadBlockId(f"block ids must lie in [0, {P.E})")
    if i == j:
        return 0
    blocks = P.blocks()
    src, dst = (i, j) if len(blocks[i]) <= len(blocks[j]) else (j, i)
    mask = P.block_of == dst
    dist = _bfs(P.field, P.k, blocks[src], mask)
    hit = dist[mask]
    return int(hit[hit >= 0].min())


def block_distance_matrix(P) -> np.ndarray:
    """All pairwise block distances (E x E).  Grouped partitions use weight gaps."""
    if isinstance(P, GroupedWeightPartition):
        return _grouped_distance_matrix(P)
    E = P.E
    out = np.zeros((E, E), dtype=np.int64)
    if E > 64:
        return _layered_distance_matrix(P)
    steps = _neighbour_steps(P.field, P.k)
    for i, block in enumerate(P.blocks()):
        dist = _bfs(P.field, P.k, block, steps=steps)
        row = np.full(E, UNREACHED, dtype=np.int64)
        np.minimum.at(row, P.block_of, dist)
        out[i] = row
    np.fill_diagonal(out, 0)
    return np.minimum(out, out.T)


def _layered_distance_matrix(P: ExplicitPartition) -> np.ndarray:
    # many blocks: sweep spheres of growing radius until every pair is settled
    from .gf import ball_offsets, digits_to_ranks

    E, q, k = P.E, P.q, P.k
    out = np.full((E, E), UNREACHED, dtype=np.int64)
    np.fill_diagonal(out, 0)
    digits = space_digits(q, k).astype(np.int64)
    lab = P.block_of
    for radius in range(1, k + 1):
        for pos, vals in ball_offsets(P.field, k, radius):
            if len(pos) != radius:
                continue
            moved = digits.copy()
            for i, v in zip(pos, vals):
                moved[:, i] = P.field.add[moved[:, i], v]
            other = lab[digits_to_ranks(moved, q)]
            cross = lab != other
            np.minimum.at(out, (lab[cross], other[cross]), radius)
        if (out < UNREACHED).all():
            break
    return out


def _grouped_distance_matrix(G: GroupedWeightPartition) -> np.ndarray:
    w = np.arange(G.k + 1)
    gap = np.abs(w[:, None] - w[None, :])
    out = np.full((G.E, G.E), UNREACHED, dtype=np.int64)
    np.minimum.at(out, (G.group_of[:, None].repeat(G.k + 1, 1), G.group_of[None, :].repeat(G.k + 1, 0)), gap)
    np.fill_diagonal(out, 0)
    return out


def block_distance_grouped(G: GroupedWeightPartition, r: int, s: int) -> int:
    """Distance between groups r and s of a consecutive grouped-weight partition."""
    if not G.consecutive:
        raise NotConsecutive("closed-form block distance needs interval groups")
    if not (0 <= r < G.E and 0 <= s < G.E):
        raise BadBlockId(f"group ids must lie in [0, {G.E})")
    if r == s:
        return 0
    r, s = min(r, s), max(r, s)
    return G.groups[s][0] - G.groups[r][-1]


def pdm(P, t: int) -> DistanceMatrix:
    if t < 1:
        raise InvalidArgs("t must be positive")
    D = requirement(t, block_distance_matrix(P))
    np.fill_diagonal(D, 0)
    return DistanceMatrix(D, t, "PDM")


def _ranks(vectors) -> np.ndarray:
    return np.array([v.rank if isinstance(v, Word) else int(v) for v in vectors], dtype=np.int64)


def pdrm(P: ExplicitPartition, t: int, vectors) -> DistanceMatrix:
    """Requirement matrix over the given words (Words or ranks)."""
    ranks = _ranks(vectors)
    digits = space_digits(P.q, P.k)[ranks]
    d = (digits[:, None, :] != digits[None, :, :]).sum(axis=2)
    lab = P.block_of[ranks]
    D = np.where(lab[:, None] != lab[None, :], requirement(t, d), 0)
    return DistanceMatrix(D, t, "PDRM")


def weight_representatives(field: Field, k: int, a: int = 1) -> list[Word]:
    """u_i = (a,...,a,0,...,0) with i leading copies of a, for i = 0..k."""
    return [Word(field, (a,) * i + (0,) * (k - i)) for i in range(k + 1)]


def pdrm_grouped(G: GroupedWeightPartition, t: int) -> DistanceMatrix:
    """PDRM over the k+1 weight representatives, computed without materializing."""
    w = np.arange(G.k + 1)
    gap = np.abs(w[:, None] - w[None, :])
    cross = G.group_of[:, None] != G.group_of[None, :]
    return DistanceMatrix(np.where(cross, requirement(t, gap), 0), t, "PDRM")
