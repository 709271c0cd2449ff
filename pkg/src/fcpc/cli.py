"""fcpc command-line interface.

Exit codes: 0 ok, 1 domain error (or a failed verification), 2 budget
exceeded, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io
from .errors import BudgetExceeded, FcpcError
from .gf import field_new

EXIT_OK, EXIT_DOMAIN, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def emit(obj, args=None):
    sys.stdout.write(json.dumps(obj) + "\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--q", type=int, default=None, help="field size")
    p.add_argument("--k", type=int, default=None, help="message length")
    p.add_argument("--t", type=int, default=None, help="number of correctable errors")
    p.add_argument("--budget", type=int, default=10**8, help="search node budget")
    p.add_argument("--threads", type=int, default=1, help="accepted; searches run single-threaded")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--format", choices=["json", "csv", "dot"], default="json")
    return p


def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--{name} is required here")
    return v


def _load_partition(args):
    if not args.partition:
        raise UsageError("--partition is required")
    return io.partition_from_json(io.read_json(args.partition), q=args.q)


# ----------------------------------------------------------------------------
# subcommands


def cmd_partition(args):
    from .partitions import (
        as_explicit,
        coordinate_partition,
        function_class_size,
        grouped,
        hwdf_partition,
        support_partition,
        weight_partition,
    )

    if args.spec:
        P, F = io.partition_from_json(io.read_json(args.spec), q=args.q)
    else:
        kind = args.kind
        k = _need(args, "k")
        F = field_new(args.q or 2)
        if kind == "weight":
            P = weight_partition(k)
        elif kind == "hwdf":
            P = hwdf_partition(k, _need(args, "T"))
        elif kind == "grouped":
            P = grouped(json.loads(_need(args, "groups")), k)
        elif kind == "support":
            P = support_partition(F, k)
        elif kind == "coordinate":
            P = coordinate_partition(F, k, json.loads(_need(args, "J")))
        else:
            raise UsageError(f"--kind {kind} needs --spec")
    if args.materialize:
        P = as_explicit(P, F)
    if args.format == "dot":
        from .pgraph import PartitionGraph

        sys.stdout.write(PartitionGraph(as_explicit(P, F)).to_dot())
        return EXIT_OK
    out = io.partition_to_json(P)
    if "q" not in out:
        out["q"] = F.q
    if args.describe:
        out = {"partition": out, "E": P.E}
        if args.H is not None:
            out["function_class_size"] = function_class_size(args.H, P.E)
    emit(out)
    return EXIT_OK


def cmd_join(args):
    from .partitions import GroupedWeightPartition, as_explicit, join, join_grouped

    A, F = io.partition_from_json(io.read_json(args.a), q=args.q)
    B, _ = io.partition_from_json(io.read_json(args.b), q=args.q)
    if isinstance(A, GroupedWeightPartition) and isinstance(B, GroupedWeightPartition):
        J = join_grouped(A, B)
    else:
        J = join(as_explicit(A, F), as_explicit(B, F))
    out = io.partition_to_json(J)
    out.setdefault("q", F.q)
    emit(out)
    return EXIT_OK


def _emit_matrix(D, args):
    if args.format == "csv":
        sys.stdout.write(D.to_csv())
    else:
        emit(D.to_json())


def cmd_pdm(args):
    from .metrics import pdm

    P, F = _load_partition(args)
    _emit_matrix(pdm(P, _need(args, "t")), args)
    return EXIT_OK


def cmd_pdrm(args):
    from .metrics import pdrm, pdrm_grouped
    from .partitions import GroupedWeightPartition, as_explicit

    P, F = _load_partition(args)
    t = _need(args, "t")
    if args.vectors is None and args.clique is None:
        if not isinstance(P, GroupedWeightPartition):
            raise UsageError("--vectors or --clique is required for explicit partitions")
        _emit_matrix(pdrm_grouped(P, t), args)
        return EXIT_OK
    Pe = as_explicit(P, F)
    if args.clique:
        words = list(io.clique_from_json(F, io.read_json(args.clique)))
    else:
        words = [io.word_from_json(F, w, Pe.k) for w in io.read_json(args.vectors)]
    _emit_matrix(pdrm(Pe, t, words), args)
    return EXIT_OK


def cmd_clique(args):
    from .partitions import as_explicit
    from .pgraph import PartitionGraph, find_full_clique

    P, F = _load_partition(args)
    Pe = as_explicit(P, F)
    if args.format == "dot":
        sys.stdout.write(PartitionGraph(Pe).to_dot())
        return EXIT_OK
    cl = find_full_clique(Pe, max_blocks=args.max_blocks, budget=args.budget)
    if cl is None:
        emit({"found": False, "E": Pe.E})
    else:
        emit({"found": True, **cl.to_json()})
    return EXIT_OK


def cmd_contraction(args):
    from .contraction import mask_contraction, verify_contraction, weight_contraction
    from .partitions import GroupedWeightPartition

    P, F = _load_partition(args)
    k = P.k
    if args.contraction:
        C = io.contraction_from_json(io.read_json(args.contraction), F, k)
    elif args.rule == "weight":
        C = weight_contraction(F, k)
    elif args.rule == "mask":
        C = mask_contraction(F, k, json.loads(_need(args, "J")))
    else:
        raise UsageError("give --contraction FILE or --rule weight|mask")
    chk = verify_contraction(P, C, seed=args.seed)
    emit({"contraction": C.to_json(), "ok": chk.ok, "reason": chk.reason,
          "witness": list(chk.witness) if chk.witness else None,
          "exhaustive": chk.exhaustive, "samples": chk.samples})
    return EXIT_OK if chk.ok else EXIT_DOMAIN


def cmd_dcode(args):
    from .dcode import min_dcode

    D = io.matrix_from_json(io.read_json(args.matrix))
    F = field_new(args.q or 2)
    rep = min_dcode(D, F, r_max=args.r_max, budget=args.budget, r_start=args.r_start)
    emit(rep.to_json())
    return EXIT_OK


def cmd_bounds(args):
    from .bounds import plotkin_lower, support_bounds, trivial_lower, weight_bounds
    from .metrics import pdrm
    from .partitions import GroupedWeightPartition, as_explicit
    from .pgraph import find_full_clique

    t = _need(args, "t")
    if args.family:
        F = field_new(args.q or 2)
        k = _need(args, "k")
        fn = weight_bounds if args.family == "weight" else support_bounds
        emit(fn(k, t, F, budget=min(args.budget, 10**7)).to_json())
        return EXIT_OK
    P, F = _load_partition(args)
    out = {"E": P.E, "trivial_lower": trivial_lower(P.E, t)}
    if isinstance(P, GroupedWeightPartition) and P.E == P.k + 1:
        out["weight"] = weight_bounds(P.k, t, F, budget=min(args.budget, 10**7)).to_json()
    elif (getattr(P, "origin", None) or ("",))[0] == "support":
        out["support"] = support_bounds(P.k, t, F, budget=min(args.budget, 10**7)).to_json()
    else:
        Pe = as_explicit(P, F)
        cl = find_full_clique(Pe, budget=args.budget)
        if cl is not None:
            out["clique_plotkin_lower"] = plotkin_lower(pdrm(Pe, t, list(cl)), F)
    emit(out)
    return EXIT_OK


def cmd_gains(args):
    from .bounds import join_bounds, partition_gains

    rs = args.individual
    k = _need(args, "k")
    rg, rate = partition_gains(rs, args.r, k)
    out = {"redundancy_gain": str(rg), "rate_gain": str(rate)}
    if args.t is not None:
        out["join_bounds"] = join_bounds(rs, k, args.t, args.n_full).to_json()
    emit(out)
    return EXIT_OK


def cmd_encode(args):
    from .codec import construction_locally_bounded, optimal_redundancy

    P, F = _load_partition(args)
    t = _need(args, "t")
    if args.construction == "locally-bounded":
        enc = construction_locally_bounded(P, t, F)
        emit({"encoding": enc.to_json()})
        return EXIT_OK
    C = io.contraction_from_json(io.read_json(args.contraction), F, P.k) if args.contraction else None
    cert, enc = optimal_redundancy(P, t, strategy=args.strategy, budget=args.budget, contraction=C, field=F)
    emit({"certificate": cert.to_json(), "encoding": enc.to_json()})
    return EXIT_OK


def cmd_verify(args):
    from .codec import verify_encoding

    P, F = _load_partition(args)
    obj = io.read_json(args.encoding)
    obj = obj.get("encoding", obj)
    enc = io.encoding_from_json(P, F, obj)
    t = args.t if args.t is not None else enc.t
    chk = verify_encoding(P, t, enc)
    emit({"ok": chk.ok, "method": chk.method, "witness": list(chk.witness) if chk.witness else None,
          "distance": chk.distance})
    return EXIT_OK if chk.ok else EXIT_DOMAIN


def cmd_decode(args):
    from .codec import decode

    P, F = _load_partition(args)
    obj = io.read_json(args.encoding)
    enc = io.encoding_from_json(P, F, obj.get("encoding", obj))
    y = io.word_from_json(F, args.word if not args.word.startswith("[") else json.loads(args.word))
    block, msg = decode(enc, y)
    emit({"block": block, "message_rank": msg})
    return EXIT_OK


def cmd_example(args):
    from .examples import CASES, run_all_examples, run_case

    if args.all or args.id in (None, "all"):
        rep = run_all_examples(budget=args.budget)
        emit(rep)
        status = rep["status"]
    else:
        if args.id not in CASES:
            raise UsageError(f"unknown example {args.id!r}; choose from {', '.join(CASES)}")
        res = run_case(args.id, budget=args.budget)
        emit(res.to_json())
        status = res.status
    return {"PASS": EXIT_OK, "FAIL": EXIT_DOMAIN, "BUDGET-EXCEEDED": EXIT_BUDGET}[status]


def cmd_locally_bounded(args):
    from .pgraph import is_locally_bounded

    P, F = _load_partition(args)
    ok = is_locally_bounded(P, args.rho, args.lam, F)
    emit({"locally_bounded": ok, "rho": args.rho, "lambda": args.lam})
    return EXIT_OK


# ----------------------------------------------------------------------------


def build_parser() -> Parser:
    common = _common()
    ap = Parser(prog="fcpc", description="Function-correcting partition codes toolkit")
    sub = ap.add_subparsers(dest="cmd", parser_class=Parser)

    def add(name, fn, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(fn=fn)
        return p

    p = add("partition", cmd_partition, "build or normalize a partition")
    p.add_argument("--spec", help="partition JSON to load")
    p.add_argument("--kind", choices=["weight", "hwdf", "grouped", "support", "coordinate"], default="weight")
    p.add_argument("--T", type=int, help="threshold for hwdf")
    p.add_argument("--J", help="1-based index set as JSON, e.g. [2,3]")
    p.add_argument("--groups", help="weight groups as JSON")
    p.add_argument("--materialize", action="store_true")
    p.add_argument("--describe", action="store_true")
    p.add_argument("--H", type=int, help="codomain size for the function-class count")

    p = add("join", cmd_join, "join of two partitions")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    for name, fn in (("pdm", cmd_pdm), ("pdrm", cmd_pdrm)):
        p = add(name, fn, f"{name.upper()} of a partition")
        p.add_argument("--partition", required=True)
        if name == "pdrm":
            p.add_argument("--vectors", help="JSON list of words")
            p.add_argument("--clique", help="clique JSON")

    p = add("clique", cmd_clique, "full-size clique search")
    p.add_argument("--partition", required=True)
    p.add_argument("--max-blocks", type=int, default=16)

    p = add("contraction", cmd_contraction, "build or verify a block-preserving contraction")
    p.add_argument("--partition", required=True)
    p.add_argument("--contraction")
    p.add_argument("--rule", choices=["weight", "mask"])
    p.add_argument("--J")

    p = add("dcode", cmd_dcode, "minimal D-code search")
    p.add_argument("--matrix", required=True)
    p.add_argument("--r-max", type=int, default=32)
    p.add_argument("--r-start", type=int, default=None)

    p = add("bounds", cmd_bounds, "redundancy bounds")
    p.add_argument("--partition")
    p.add_argument("--family", choices=["weight", "support"])

    p = add("gains", cmd_gains, "partition gains and join bounds")
    p.add_argument("--individual", type=int, nargs="+", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n-full", type=int, default=None)

    p = add("encode", cmd_encode, "synthesize an encoding")
    p.add_argument("--partition", required=True)
    p.add_argument("--strategy", choices=["Auto", "CliqueOnly", "ContractionOnly", "FullPDRM"], default="Auto")
    p.add_argument("--construction", choices=["optimal", "locally-bounded"], default="optimal")
    p.add_argument("--contraction")

    p = add("verify", cmd_verify, "verify an encoding")
    p.add_argument("--partition", required=True)
    p.add_argument("--encoding", required=True)

    p = add("decode", cmd_decode, "nearest-codeword decoding")
    p.add_argument("--partition", required=True)
    p.add_argument("--encoding", required=True)
    p.add_argument("--word", required=True, help="received word, e.g. 0010111100")

    p = add("example", cmd_example, "re-derive a worked example and diff against goldens")
    p.add_argument("id", nargs="?", default=None)
    p.add_argument("--all", action="store_true", help="run every case (the default without an id)")

    p = add("locally-bounded", cmd_locally_bounded, "locally (rho, lambda)-bounded test")
    p.add_argument("--partition", required=True)
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--lam", type=int, required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError("a subcommand is required")
        return args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"fcpc: usage error: {exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        out = {"error": "budget exceeded", "message": str(exc)}
        if exc.report is not None and hasattr(exc.report, "to_json"):
            out["report"] = exc.report.to_json()
        emit(out)
        return EXIT_BUDGET
    except (FcpcError, ValueError) as exc:
        emit({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_DOMAIN
    except OSError as exc:
        sys.stderr.write(f"fcpc: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
