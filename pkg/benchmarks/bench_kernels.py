"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""

import argparse
import json
import time

import numpy as np

from fcpc import kernels
from fcpc.dcode import min_dcode, n_classical
from fcpc.gf import field_new
from fcpc.metrics import DistanceMatrix, pdrm, pdrm_grouped
from fcpc.partitions import hwdf_partition, support_partition, weight_partition
from fcpc.pgraph import support_clique


def dcode_cases():
    F2, F3 = field_new(2), field_new(3)
    S = pdrm(support_partition(F3, 3), 2, list(support_clique(F3, 3)))
    yield "support F3^3 t=2, no symmetry", lambda b: min_dcode(S, F3, backend=b, symmetry=False)
    yield "weight F3 k=3 t=2 from r=0", lambda b: min_dcode(pdrm_grouped(weight_partition(3), 2), F3, r_start=0, backend=b)
    yield "N(8,3) binary", lambda b: n_classical(8, 3, F2, backend=b)
    yield "N(4,4) ternary", lambda b: n_classical(4, 4, F3, backend=b)
    yield "delta3 k=35 t=2", lambda b: min_dcode(pdrm_grouped(hwdf_partition(35, 3), 2), F2, backend=b)
    A = np.full((6, 6), 4)
    np.fill_diagonal(A, 0)
    yield "N(6,4) binary, no symmetry", lambda b: min_dcode(DistanceMatrix(A), F2, backend=b, symmetry=False)


def scan_case(mod, n=2048, width=14, seed=0):
    rng = np.random.default_rng(seed)
    cw = rng.integers(0, 2, size=(n, width)).astype(np.uint8)
    labels = rng.integers(0, 8, size=n).astype(np.int64)
    # threshold 0 never fires, so the whole upper triangle is scanned
    return lambda: mod.scan_encoding(cw, labels, 0)


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="write results here too")
    args = ap.parse_args()

    try:
        kernels.backend("cython")
    except ImportError:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")

    rows = []
    for name, fn in dcode_cases():
        tc, rc = best_of(lambda: fn("cython"), args.repeat)
        tp, rp = best_of(lambda: fn("python"), args.repeat)
        assert rc.r_min == rp.r_min and rc.nodes_expanded == rp.nodes_expanded
        rows.append({"case": name, "r_min": rc.r_min, "nodes": rc.nodes_expanded, "cython_s": tc, "python_s": tp})
    tc, _ = best_of(scan_case(kernels.backend("cython")), args.repeat)
    tp, _ = best_of(scan_case(kernels.backend("python")), args.repeat)
    rows.append({"case": "scan_encoding 2048 words", "r_min": None, "nodes": 2048 * 2047 // 2,
                 "cython_s": tc, "python_s": tp})

    print(f"{'case':34s} {'r':>3s} {'nodes':>10s} {'cython':>10s} {'python':>10s} {'speedup':>8s}")
    for r in rows:
        sp = r["python_s"] / r["cython_s"] if r["cython_s"] > 0 else float("inf")
        rmin = "" if r["r_min"] is None else str(r["r_min"])
        print(f"{r['case']:34s} {rmin:>3s} {r['nodes']:>10d} {r['cython_s']:>9.4f}s {r['python_s']:>9.4f}s {sp:>7.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
