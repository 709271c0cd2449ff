"""Systematic (P,t)-encodings: synthesis, verification, optimal redundancy, decoding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .contraction import Contraction, block_labels, dense_contraction, verify_contraction, weight_contraction
from .dcode import DEFAULT_BUDGET, DCode, SearchReport, min_dcode, verify_dcode
from .errors import (
    CertificateMismatch,
    InvalidArgs,
    NotFullSize,
    NotLocallyBounded,
    SearchBudgetExceeded,
)
from .gf import Field, Word, ball_ranks, check_space, digits_to_ranks, space_digits
from .kernels import backend
from .metrics import DistanceMatrix, pdrm, pdrm_grouped
from .partitions import ExplicitPartition, GroupedWeightPartition, as_explicit
from .pgraph import (
    Clique,
    _ball_size,
    coordinate_clique,
    coset_clique,
    find_full_clique,
    is_locally_bounded,
    support_clique,
)

EXHAUSTIVE_CAP = 1 << 11

# how the redundancy table Z is indexed
KEYS = ("rank", "block", "weight", "contraction")


@dataclass(frozen=True, eq=False)
class Encoding:
    """x -> (x, Z[key(x)]) with Z a table of redundancy words.

    key "rank": one row per message; "block": one row per block id;
    "weight": one row per Hamming weight; "contraction": one row per word of
    the contraction image U, looked up through phi.
    """

    P: Any  # ExplicitPartition | GroupedWeightPartition
    field: Field
    k: int
    t: int
    Z: np.ndarray
    key: str
    contraction: Contraction | None = None
    kind: str = ""  # label kept for JSON / reports ("construction1", "per-block", ...)

    def __post_init__(self):
        if self.key not in KEYS:
            raise InvalidArgs(f"unknown encoding key {self.key!r}")
        Z = np.ascontiguousarray(np.asarray(self.Z, dtype=np.uint8).reshape(len(self.Z), -1))
        Z.setflags(write=False)
        object.__setattr__(self, "Z", Z)

    @property
    def r(self) -> int:
        return self.Z.shape[1]

    @property
    def n(self) -> int:
        return self.k + self.r

    def weight_only(self) -> bool:
        """True when the redundancy depends on the message only through its weight."""
        if self.key == "weight":
            return True
        return self.key == "contraction" and self.contraction.kind == "weight"

    def class_of(self, digits: np.ndarray) -> np.ndarray:
        digits = np.asarray(digits)
        if self.key == "rank":
            return digits_to_ranks(digits, self.field.q)
        if self.key == "block":
            return block_labels(self.P, digits)
        if self.key == "weight":
            return np.count_nonzero(digits, axis=-1)
        C = self.contraction
        if C.kind == "dense":
            return C.index[digits_to_ranks(digits, self.field.q)]
        if C.kind == "weight":
            return np.count_nonzero(digits, axis=-1)
        img = digits_to_ranks(C.apply(digits), self.field.q)
        return np.searchsorted(np.asarray(C.U, dtype=np.int64), img)

    def redundancy_digits(self, digits: np.ndarray) -> np.ndarray:
        return self.Z[self.class_of(digits)]

    def redundancy(self, u: Word) -> Word:
        row = self.redundancy_digits(np.array([u.digits]))[0]
        return Word(self.field, tuple(int(x) for x in row))

    def encode(self, u: Word) -> Word:
        return Word(self.field, u.digits + self.redundancy(u).digits)

    def codewords(self) -> np.ndarray:
        digits = space_digits(self.field.q, self.k)
        return np.ascontiguousarray(np.concatenate([digits, self.redundancy_digits(digits)], axis=1))

    def to_json(self) -> dict:
        fmt = _fmt_word(self.field)
        rows = [fmt(z) for z in self.Z]
        if self.key == "block":
            rule = {"kind": "per-block", "assignments": {str(i): z for i, z in enumerate(rows)}}
        elif self.key == "weight":
            rule = {"kind": "weight", "assignments": {str(i): z for i, z in enumerate(rows)}}
        elif self.key == "rank":
            rule = {"kind": "dense", "table": rows}
        else:
            rule = {"kind": "contraction", "contraction": self.contraction.to_json(), "code": rows}
        out = {"t": self.t, "r": self.r, "k": self.k, "field": self.field.to_json(), "rule": rule}
        if self.kind:
            out["construction"] = self.kind
        return out

    @classmethod
    def from_json(cls, P, field: Field, obj: dict) -> "Encoding":
        rule = obj["rule"]
        k = int(obj["k"]) if "k" in obj else P.k
        parse = lambda z: _parse_word(field, z)
        kind = rule["kind"]
        C = None
        if kind in ("per-block", "weight"):
            a = rule["assignments"]
            rows = [parse(a[str(i)]) for i in range(len(a))]
            key = "block" if kind == "per-block" else "weight"
        elif kind == "dense":
            rows = [parse(z) for z in rule["table"]]
            key = "rank"
        elif kind == "contraction":
            C = Contraction.from_json(field, k, rule["contraction"])
            rows = [parse(z) for z in rule["code"]]
            key = "contraction"
        else:
            raise InvalidArgs(f"unknown encoding rule {kind!r}")
        r = int(obj["r"])
        Z = np.array(rows, dtype=np.uint8).reshape(len(rows), r)
        return cls(P, field, k, int(obj["t"]), Z, key, C, obj.get("construction", ""))


def _fmt_word(field: Field):
    if field.q <= 10:
        return lambda z: "".join(str(int(x)) for x in z)
    return lambda z: [int(x) for x in z]


def _parse_word(field: Field, z) -> list[int]:
    if isinstance(z, str):
        return list(Word.parse(field, z).digits)
    return [int(x) for x in z]


def _field_of(P, field: Field | None) -> Field:
    if isinstance(P, ExplicitPartition):
        return P.field
    if field is None:
        raise InvalidArgs("a field is required for grouped-weight partitions")
    return field


# ----------------------------------------------------------------------------
# synthesis


def contraction_pdrm(P, t: int, C: Contraction) -> DistanceMatrix:
    if isinstance(P, GroupedWeightPartition) and C.kind == "weight":
        return pdrm_grouped(P, t)
    if C.U is None:
        raise InvalidArgs("contraction image too large to list")
    return pdrm(as_explicit(P, C.field), t, list(C.U))


def encode_from_dcode(P, t: int, C: Contraction, code: DCode) -> Encoding:
    D = contraction_pdrm(P, t, C)
    check = verify_dcode(D, code)
    if not check:
        i, j, d, need = check.violation
        raise CertificateMismatch(f"code words {i},{j} are at distance {d}, PDRM needs {need}")
    Z = code.digits() if len(code) else np.zeros((D.n, 0))
    Z = np.asarray(Z).reshape(D.n, code.r)
    return Encoding(P, C.field, C.k, t, Z, "contraction", C, "contraction")


def per_block_encoding(P: ExplicitPartition, t: int, rows) -> Encoding:
    """Redundancy chosen by block id (canonical order)."""
    Z = np.asarray([_parse_word(P.field, z) for z in rows], dtype=np.uint8)
    if len(Z) != P.E:
        raise InvalidArgs(f"need one redundancy word per block ({P.E}), got {len(Z)}")
    return Encoding(P, P.field, P.k, t, Z, "block", kind="per-block")


def dense_encoding(P: ExplicitPartition, t: int, rows) -> Encoding:
    Z = np.asarray([_parse_word(P.field, z) for z in rows], dtype=np.uint8)
    if len(Z) != P.size:
        raise InvalidArgs(f"need one redundancy word per message ({P.size}), got {len(Z)}")
    return Encoding(P, P.field, P.k, t, Z, "rank", kind="dense")


def construction_locally_bounded(P, t: int, field: Field | None = None) -> Encoding:
    """Redundancy 2t: zeros if the word's block is the least block meeting its 2t-ball, else ones."""
    if t < 1:
        raise InvalidArgs("t must be positive")
    F = _field_of(P, field)
    if not is_locally_bounded(P, 2 * t, 2):
        raise NotLocallyBounded(f"some radius-{2 * t} ball meets more than two blocks")
    if isinstance(P, GroupedWeightPartition):
        k = P.k
        flags = np.array([P.group_of[w] == P.group_of[max(0, w - 2 * t): min(k, w + 2 * t) + 1].min()
                          for w in range(k + 1)])
        Z = np.where(flags[:, None], 0, 1) * np.ones((1, 2 * t), dtype=np.uint8)
        return Encoding(P, F, k, t, Z, "weight", kind="construction1")
    n = P.size
    flags = np.empty(n, dtype=bool)
    chunk = max(1, (1 << 20) // _ball_size(P.q, P.k, 2 * t))
    for start in range(0, n, chunk):
        ranks = np.arange(start, min(n, start + chunk))
        labs = P.block_of[ball_ranks(F, P.k, 2 * t, ranks)]
        flags[ranks] = labs[:, 0] == labs.min(axis=1)
    Z = np.where(flags[:, None], 0, 1) * np.ones((1, 2 * t), dtype=np.uint8)
    return Encoding(P, F, P.k, t, Z, "rank", kind="construction1")


# ----------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class EncodingCheck:
    ok: bool
    method: str  # "exhaustive" | "near-pair" | "weight-level"
    witness: tuple[int, int] | None = None  # message ranks (or weights for weight-level)
    distance: int | None = None
    pairs: int = 0

    def __bool__(self):
        return self.ok


def verify_encoding(P, t: int, enc: Encoding, exhaustive_cap: int = EXHAUSTIVE_CAP,
                    method: str | None = None) -> EncodingCheck:
    """Check d(C(u), C(v)) >= 2t+1 for every cross-block pair.

    Small spaces are scanned pairwise.  Redundancies that depend only on the
    weight, over a grouped-weight partition, are checked weight by weight.
    Otherwise only message pairs within distance 2t can violate the bound, so
    scanning every 2t-ball is exact.
    """
    need = 2 * t + 1
    q, k = enc.field.q, enc.k
    if method is None:
        if q**k <= exhaustive_cap:
            method = "exhaustive"
        elif isinstance(P, GroupedWeightPartition) and enc.weight_only():
            method = "weight-level"
        else:
            method = "near-pair"
    if method == "weight-level":
        return _verify_weight_level(P, need, enc)
    if method == "exhaustive":
        check_space(q, k)
        cw = enc.codewords()
        labels = np.ascontiguousarray(block_labels(P, cw[:, :k]), dtype=np.int64)
        hit = backend().scan_encoding(cw, labels, need)
        n = len(cw)
        if hit is None:
            return EncodingCheck(True, "exhaustive", pairs=n * (n - 1) // 2)
        i, j = hit
        return EncodingCheck(False, "exhaustive", (i, j), int(np.count_nonzero(cw[i] != cw[j])))
    if method == "near-pair":
        return _verify_near_pairs(P, need, enc)
    raise InvalidArgs(f"unknown verification method {method!r}")


def _verify_weight_level(P: GroupedWeightPartition, need: int, enc: Encoding) -> EncodingCheck:
    k = enc.k
    w = np.arange(k + 1)
    Zw = enc.redundancy_digits(np.array([[1] * i + [0] * (k - i) for i in range(k + 1)]))
    rd = (Zw[:, None, :] != Zw[None, :, :]).sum(axis=2)
    total = np.abs(w[:, None] - w[None, :]) + rd
    cross = P.group_of[:, None] != P.group_of[None, :]
    bad = np.argwhere(np.triu(cross & (total < need)))
    pairs = int(np.triu(cross).sum())
    if len(bad):
        i, j = (int(x) for x in bad[0])
        return EncodingCheck(False, "weight-level", (i, j), int(total[i, j]), pairs)
    return EncodingCheck(True, "weight-level", pairs=pairs)


def _verify_near_pairs(P, need: int, enc: Encoding) -> EncodingCheck:
    F, k = enc.field, enc.k
    q = F.q
    n = check_space(q, k)
    digits = space_digits(q, k)
    radius = need - 1
    width = _ball_size(q, k, radius)
    chunk = max(1, (1 << 21) // (width * max(1, enc.r)))
    pairs = 0
    for start in range(0, n, chunk):
        ranks = np.arange(start, min(n, start + chunk))
        ball = ball_ranks(F, k, radius, ranks)[:, 1:]
        lab_c = block_labels(P, digits[ranks])
        lab_b = block_labels(P, digits[ball.reshape(-1)]).reshape(ball.shape)
        mask = (lab_b != lab_c[:, None]) & (ball > ranks[:, None])
        ci, bj = np.nonzero(mask)
        if len(ci) == 0:
            continue
        a, b = ranks[ci], ball[ci, bj]
        pairs += len(a)
        dmsg = np.count_nonzero(digits[a] != digits[b], axis=1)
        za = enc.redundancy_digits(digits[a])
        zb = enc.redundancy_digits(digits[b])
        d = dmsg + np.count_nonzero(za != zb, axis=1)
        bad = np.nonzero(d < need)[0]
        if len(bad):
            i = bad[0]
            return EncodingCheck(False, "near-pair", (int(a[i]), int(b[i])), int(d[i]), pairs)
    return EncodingCheck(True, "near-pair", pairs=pairs)


# ----------------------------------------------------------------------------
# optimal redundancy


@dataclass(frozen=True)
class OptimalityCertificate:
    r: int
    method: str  # "Clique" | "Contraction" | "FullPDRM"
    lower_source: str
    exact: bool
    U_size: int
    E: int
    report: SearchReport
    route: str = ""  # which family / search produced U

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "method": self.method,
            "route": self.route,
            "lower_source": self.lower_source,
            "exact": self.exact,
            "U_size": self.U_size,
            "E": self.E,
            "search": self.report.to_json(),
        }


STRATEGIES = ("Auto", "CliqueOnly", "ContractionOnly", "FullPDRM")


def _family_contraction(P, field: Field) -> tuple[Contraction, str] | None:
    if isinstance(P, GroupedWeightPartition):
        return weight_contraction(field, P.k), "weight contraction"
    origin = P.origin or ()
    if not origin:
        return None
    tag = origin[0]
    if tag == "grouped":
        return weight_contraction(field, P.k), "weight contraction"
    if tag == "coset":
        cl = coset_clique(origin[1])
        if cl:
            return _clique_contraction(P, cl), "coset clique"
        return None
    if tag == "support":
        return _clique_contraction(P, support_clique(field, P.k)), "support clique"
    if tag == "coordinate":
        return _clique_contraction(P, coordinate_clique(field, P.k, origin[1])), "coordinate clique"
    return None


def _clique_contraction(P: ExplicitPartition, clique: Clique) -> Contraction:
    from .contraction import clique_to_contraction

    return clique_to_contraction(P, clique)


def _searched_clique(P: ExplicitPartition, max_blocks: int) -> Contraction | None:
    try:
        cl = find_full_clique(P, max_blocks=max_blocks)
    except SearchBudgetExceeded:
        return None
    return _clique_contraction(P, cl) if cl is not None else None


def _identity_contraction(P: ExplicitPartition) -> Contraction:
    n = P.size
    return dense_contraction(P.field, P.k, range(n), range(n))


def optimal_redundancy(P, t: int, strategy: str = "Auto", budget: int = DEFAULT_BUDGET,
                       contraction: Contraction | None = None, field: Field | None = None,
                       max_blocks: int = 16) -> tuple[OptimalityCertificate, Encoding]:
    if strategy not in STRATEGIES:
        raise InvalidArgs(f"strategy must be one of {STRATEGIES}")
    if t < 1:
        raise InvalidArgs("t must be positive")
    F = _field_of(P, field)
    E = P.E
    C: Contraction | None = None
    route = ""
    if strategy in ("Auto", "CliqueOnly", "ContractionOnly"):
        fam = _family_contraction(P, F)
        if fam is not None and (strategy != "CliqueOnly" or fam[0].size == E):
            C, route = fam
    if C is None and strategy in ("Auto", "CliqueOnly"):
        Pe = as_explicit(P, F)
        C = _searched_clique(Pe, max_blocks)
        route = "clique search" if C is not None else route
        if C is None and strategy == "CliqueOnly":
            raise NotFullSize("no full-size clique found for this partition")
    if C is None and contraction is not None and strategy in ("Auto", "ContractionOnly"):
        chk = verify_contraction(P, contraction)
        if not chk:
            raise CertificateMismatch(f"supplied contraction {chk.describe()}")
        if not chk.exhaustive:
            raise CertificateMismatch("supplied contraction only verified by sampling")
        C, route = contraction, "supplied contraction"
    if C is None and strategy == "ContractionOnly":
        raise InvalidArgs("ContractionOnly needs a known family or a supplied contraction")
    if C is None:
        C, route = _identity_contraction(as_explicit(P, F)), "all words"
    method = "FullPDRM" if route == "all words" else ("Clique" if C.size == E else "Contraction")
    D = contraction_pdrm(P, t, C)
    rep = min_dcode(D, F, budget=budget)
    if rep.r_min is None:
        from .errors import BudgetExceeded

        raise BudgetExceeded("no D-code within the length limit", rep)
    enc = encode_from_dcode(P, t, C, rep.witness)
    lower_source = "largest PDRM entry" if rep.r_min == rep.levels[0][0] else f"exhaustive refutation of length {rep.r_min - 1}"
    if rep.r_min == 0:
        lower_source = "trivial"
    cert = OptimalityCertificate(rep.r_min, method, lower_source, rep.exact, C.size, E, rep, route)
    return cert, enc


# ----------------------------------------------------------------------------
# decoding


def decode(enc: Encoding, y: Word | np.ndarray, t: int | None = None) -> tuple[int, int]:
    """(block id, message rank) of the codeword nearest to y; ties go to the least rank.

    With at most t errors the block id is always right.  ``t`` is accepted for
    symmetry with the encoder and is not needed by the rule.
    """
    yd = np.asarray(y.digits if isinstance(y, Word) else y)
    if len(yd) != enc.n:
        raise InvalidArgs(f"received word has length {len(yd)}, codewords have {enc.n}")
    cw = enc.codewords()
    d = np.count_nonzero(cw != yd[None, :], axis=1)
    best = int(np.argmin(d))
    block = int(block_labels(enc.P, cw[best : best + 1, : enc.k])[0])
    return block, best
