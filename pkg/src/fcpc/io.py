"""JSON (and CSV / DOT) formats for every artifact type."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .errors import InvalidArgs
from .gf import Field, Word, field_new
from .partitions import (
    ExplicitPartition,
    GroupedWeightPartition,
    Subspace,
    coordinate_partition,
    coset_partition,
    kernel_intersection,
    kernel_of_linear,
    support_partition,
)


def read_json(path) -> Any:
    with open(path) as fh:
        return json.load(fh)


def write_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=None, separators=(",", ":"), sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


# ----------------------------------------------------------------------------
# fields and words


def field_to_json(F: Field) -> dict:
    return F.to_json()


def field_from_json(obj) -> Field:
    if isinstance(obj, int):
        return field_new(obj)
    F = field_new(int(obj["q"]))
    if "modulus" in obj and tuple(obj["modulus"]) != F.modulus:
        raise InvalidArgs(f"GF({F.q}) is only available with modulus {list(F.modulus)}")
    return F


def word_to_json(w: Word, as_rank: bool = False):
    if as_rank:
        return {"encoding": "rank", "rank": w.rank, "k": w.k}
    return list(w.digits)


def word_from_json(F: Field, obj, k: int | None = None) -> Word:
    if isinstance(obj, str):
        return Word.parse(F, obj)
    if isinstance(obj, dict):
        if obj.get("encoding") != "rank":
            raise InvalidArgs("word objects must carry \"encoding\": \"rank\"")
        return Word.from_rank(F, int(obj.get("k", k)), int(obj["rank"]))
    if isinstance(obj, int):
        if k is None:
            raise InvalidArgs("bare rank needs a word length")
        return Word.from_rank(F, k, obj)
    return Word(F, tuple(int(x) for x in obj))


# ----------------------------------------------------------------------------
# partitions


def partition_to_json(P) -> dict:
    if isinstance(P, GroupedWeightPartition):
        return {"kind": "grouped-weight", "k": P.k, "groups": [list(g) for g in P.groups]}
    head = {"q": P.q, "k": P.k}
    if P.field.m > 1:
        head["modulus"] = list(P.field.modulus)
    origin = P.origin or ()
    if origin and origin[0] == "coset":
        return {**head, "kind": "coset", "basis": [list(b) for b in origin[1].basis]}
    if origin and origin[0] == "coordinate":
        return {**head, "kind": "coordinate", "J": list(origin[1])}
    if origin and origin[0] == "support":
        return {**head, "kind": "support"}
    if origin and origin[0] == "grouped":
        return {**head, "kind": "grouped-weight", "groups": [list(g) for g in origin[1].groups],
                "materialize": True}
    return {**head, "kind": "explicit", "block_of": P.block_of.tolist()}


def partition_from_json(obj: dict, q: int | None = None):
    """Returns (partition, field).  Grouped-weight specs stay compact unless
    they ask to be materialized; the field defaults to GF(2) for them."""
    kind = obj.get("kind", "explicit")
    qq = obj.get("q", q)
    F = field_from_json({"q": qq, **({"modulus": obj["modulus"]} if "modulus" in obj else {})}) if qq else None
    if kind == "grouped-weight":
        G = GroupedWeightPartition(int(obj["k"]), obj["groups"])
        F = F or field_new(2)
        if obj.get("materialize"):
            from .partitions import materialize

            return materialize(G, F), F
        return G, F
    if F is None:
        raise InvalidArgs(f"partition of kind {kind!r} needs q")
    if kind == "explicit":
        k = int(obj["k"])
        return ExplicitPartition(F, k, np.asarray(obj["block_of"], dtype=np.int64)), F
    if kind == "coset":
        basis = obj["basis"]
        k = int(obj.get("k", len(basis[0]) if basis else 0))
        return coset_partition(Subspace.span(F, k, basis)), F
    if kind == "kernel":
        # common kernel of linear maps given by their matrices
        V = kernel_intersection([kernel_of_linear(F, m) for m in obj["matrices"]])
        return coset_partition(V), F
    if kind == "coordinate":
        return coordinate_partition(F, int(obj["k"]), obj["J"]), F
    if kind == "support":
        return support_partition(F, int(obj["k"])), F
    raise InvalidArgs(f"unknown partition kind {kind!r}")


# ----------------------------------------------------------------------------
# other artifacts


def matrix_from_json(obj):
    from .metrics import DistanceMatrix

    return DistanceMatrix.from_json(obj)


def clique_from_json(F: Field, obj):
    from .pgraph import Clique

    return Clique.from_json(F, obj)


def contraction_from_json(obj, F: Field | None = None, k: int | None = None):
    from .contraction import Contraction

    F = F or field_from_json(obj["field"])
    return Contraction.from_json(F, int(obj.get("k", k)), obj)


def encoding_from_json(P, F: Field, obj):
    from .codec import Encoding

    return Encoding.from_json(P, F, obj)


def dcode_from_json(F: Field, obj):
    from .dcode import DCode

    return DCode.from_json(F, obj)


def report_from_json(F: Field, obj):
    from .dcode import DCode, SearchReport

    w = obj.get("witness")
    return SearchReport(
        obj["status"],
        obj["r_min"],
        DCode.from_json(F, w) if w else None,
        int(obj["nodes_expanded"]),
        int(obj["lower"]),
        [(lv["r"], lv["outcome"], lv["nodes"]) for lv in obj.get("levels", [])],
    )
