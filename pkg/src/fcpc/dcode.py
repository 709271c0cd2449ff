"""Irregular-distance codes (D-codes): verification and exact minimal-length search."""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidArgs, SizeMismatch, SpaceTooLarge
from .gf import Field, Word, check_space, space_digits
from .kernels import backend as get_backend
from .metrics import DistanceMatrix

DEFAULT_BUDGET = 10**8
MAX_R = 32


@dataclass(frozen=True)
class DCode:
    field: Field
    r: int
    words: tuple[Word, ...]

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    @classmethod
    def from_strings(cls, field: Field, words: Sequence[str]) -> "DCode":
        ws = tuple(Word.parse(field, w) for w in words)
        r = ws[0].k if ws else 0
        if any(w.k != r for w in ws):
            raise InvalidArgs("D-code words must share one length")
        return cls(field, r, ws)

    def digits(self) -> np.ndarray:
        return np.array([w.digits for w in self.words], dtype=np.int64).reshape(len(self.words), self.r)

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "r": self.r, "words": [list(w.digits) for w in self.words]}

    @classmethod
    def from_json(cls, field: Field, obj: dict) -> "DCode":
        ws = tuple(Word(field, tuple(w)) for w in obj["words"])
        return cls(field, int(obj["r"]), ws)


@dataclass(frozen=True)
class DCodeCheck:
    ok: bool
    violation: tuple[int, int, int, int] | None = None  # (i, j, distance, required)

    def __bool__(self):
        return self.ok


def _matrix(D) -> np.ndarray:
    if isinstance(D, DistanceMatrix):
        return D.entries
    return DistanceMatrix(D).entries


def verify_dcode(D, code: DCode) -> DCodeCheck:
    A = _matrix(D)
    if len(code) != A.shape[0]:
        raise SizeMismatch(f"code has {len(code)} words, matrix has order {A.shape[0]}")
    X = code.digits()
    dist = (X[:, None, :] != X[None, :, :]).sum(axis=2)
    bad = np.argwhere(np.triu(dist < A, 1))
    if len(bad):
        i, j = (int(x) for x in bad[0])
        return DCodeCheck(False, (i, j, int(dist[i, j]), int(A[i, j])))
    return DCodeCheck(True)


@dataclass
class SearchReport:
    status: str  # "Exact" | "LowerBoundOnly" | "BudgetExceeded"
    r_min: int | None
    witness: DCode | None
    nodes_expanded: int
    lower: int  # every length below this is impossible
    levels: list = dc_field(default_factory=list)  # (r, "found" | "refuted" | "budget", nodes)
    backend: str = ""
    seconds: float = 0.0

    @property
    def exact(self) -> bool:
        return self.status == "Exact"

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "r_min": self.r_min,
            "lower": self.lower,
            "nodes_expanded": self.nodes_expanded,
            "levels": [{"r": r, "outcome": o, "nodes": n} for r, o, n in self.levels],
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def assignment_order(A: np.ndarray) -> list[int]:
    """Nonzero rows by decreasing row sum, ties by index."""
    sums = A.sum(axis=1)
    idx = [i for i in range(len(A)) if sums[i] > 0]
    return sorted(idx, key=lambda i: (-sums[i], i))


def _second_words(q: int, r: int) -> list[int]:
    # 1^w 0^(r-w): everything else is equivalent up to coordinate and symbol permutations
    return [sum(q**j for j in range(w)) for w in range(r + 1)]


def _third_words(q: int, r: int, w: int) -> list[int]:
    # orbit representatives under the stabilizer of {0, 1^w 0^(r-w)}:
    # first block 1^a 2^b 0^c, second block 1^d 0^e
    out = []
    for a in range(w + 1):
        for b in range(w - a + 1 if q >= 3 else 1):
            head = [1] * a + [2] * b + [0] * (w - a - b)
            for d in range(r - w + 1):
                digits = head + [1] * d + [0] * (r - w - d)
                out.append(sum(x * q**i for i, x in enumerate(digits)))
    return sorted(out)


def _search_level(A: np.ndarray, order: list[int], q: int, r: int, budget: int, kern,
                  symmetry: bool):
    M = len(order)
    digits = np.ascontiguousarray(space_digits(q, r))
    ptr, idx, req = [0], [], []
    for p, i in enumerate(order):
        for s in range(p):
            need = A[i, order[s]]
            if need > 0:
                idx.append(s)
                req.append(int(need))
        ptr.append(len(idx))
    as64 = lambda xs: np.ascontiguousarray(np.asarray(xs, dtype=np.int64))
    cand1: list[int] = []
    cand2: list[int] = []
    cand2_ptr = [0] * (r + 2)
    if symmetry:
        cand1 = _second_words(q, r)
        # the kernel picks the third word's list by the second word's weight
        for w in range(r + 1):
            cand2.extend(_third_words(q, r, w))
            cand2_ptr[w + 1] = len(cand2)
    return kern.dfs_dcode(digits, as64(ptr), as64(idx), as64(req), as64(cand1), as64(cand2_ptr),
                          as64(cand2), int(budget), q == 2 and r <= 63, symmetry)


def min_dcode(D, field: Field, r_max: int = MAX_R, budget: int = DEFAULT_BUDGET,
              r_start: int | None = None, symmetry: bool = True, backend: str | None = None) -> SearchReport:
    """Smallest r admitting a D-code over ``field``, with a witness.

    Lengths are tried upward from ``r_start`` (default: the largest entry of D,
    which no shorter code can meet; a smaller start makes the search refute
    those lengths explicitly).  Each failed length is an exhaustive
    refutation, so a success is Exact.  Running out of ``budget`` nodes raises
    BudgetExceeded carrying a report with the lower bound established so far.
    """
    A = _matrix(D)
    if r_max > MAX_R:
        raise InvalidArgs(f"r_max must be at most {MAX_R}")
    kern = get_backend(backend)
    tag = "cython" if kern.__name__.endswith("_kernels") else "python"
    q = field.q
    M = A.shape[0]
    floor = int(A.max()) if M else 0
    r = floor if r_start is None else int(r_start)
    lower = min(r, floor)
    order = assignment_order(A)
    nodes = 0
    levels = []
    t0 = time.perf_counter()

    def report(status, r_min=None, witness=None):
        return SearchReport(status, r_min, witness, nodes, lower, levels, tag, time.perf_counter() - t0)

    if budget < 1:
        raise BudgetExceeded("node budget must be positive", report("BudgetExceeded"))
    if not order:
        lower = 0
        levels.append((0, "found", 0))
        return report("Exact", 0, DCode(field, 0, tuple(Word(field, ()) for _ in range(M))))
    while r <= r_max:
        try:
            check_space(q, r)
        except SpaceTooLarge:
            levels.append((r, "budget", 0))
            raise BudgetExceeded(f"length {r} over GF({q}) is beyond the enumeration cap",
                                 report("BudgetExceeded")) from None
        status, assign, used = _search_level(A, order, q, r, budget - nodes, kern, symmetry)
        nodes += int(used)
        if status == 1:
            levels.append((r, "found", int(used)))
            words = [Word(field, (0,) * r)] * M
            for p, i in enumerate(order):
                words[i] = Word.from_rank(field, r, int(assign[p]))
            return report("Exact", r, DCode(field, r, tuple(words)))
        if status == -1:
            levels.append((r, "budget", int(used)))
            raise BudgetExceeded(f"D-code search exceeded {budget} nodes at length {r}",
                                 report("BudgetExceeded"))
        levels.append((r, "refuted", int(used)))
        r += 1
        lower = r
    return report("LowerBoundOnly")


def n_classical(M: int, d: int, field: Field, r_max: int = MAX_R, budget: int = DEFAULT_BUDGET,
                **kw) -> SearchReport:
    """N(M, d): shortest length carrying M words at pairwise distance >= d."""
    if M < 1 or d < 0:
        raise InvalidArgs("need M >= 1 and d >= 0")
    A = np.full((M, M), d, dtype=np.int64)
    np.fill_diagonal(A, 0)
    return min_dcode(DistanceMatrix(A), field, r_max, budget, **kw)
