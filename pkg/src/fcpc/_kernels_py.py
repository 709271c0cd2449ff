"""Pure-Python (numpy-assisted) twins of the compiled kernels in ``_kernels.pyx``.

Same signatures, same visiting order, same return values; only slower.
"""

from __future__ import annotations

import numpy as np


def dfs_dcode(digits, pred_ptr, pred_idx, pred_req, cand1, cand2_ptr, cand2, budget, binary, symmetry=True):
    M = len(pred_ptr) - 1
    nw = digits.shape[0]
    assign = np.zeros(M, dtype=np.int64)
    nodes = 1
    if M <= 1:
        return 1, assign, nodes
    digits = np.asarray(digits)
    weights = np.count_nonzero(digits, axis=1)
    all_words = np.arange(nw, dtype=np.int64)

    def candidates(p):
        if not symmetry or p > 2:
            pool = all_words
        elif p == 1:
            pool = np.asarray(cand1, dtype=np.int64)
        elif p == 2:
            w = weights[assign[1]]
            pool = np.asarray(cand2[cand2_ptr[w]:cand2_ptr[w + 1]], dtype=np.int64)
        keep = np.ones(len(pool), dtype=bool)
        for e in range(pred_ptr[p], pred_ptr[p + 1]):
            other = digits[assign[pred_idx[e]]]
            keep &= (digits[pool] != other).sum(axis=1) >= pred_req[e]
        return pool[keep].tolist()

    stack = [candidates(1)]
    cursor = [0]
    while stack:
        p = len(stack)
        opts = stack[-1]
        if cursor[-1] == len(opts):
            stack.pop()
            cursor.pop()
            continue
        assign[p] = opts[cursor[-1]]
        cursor[-1] += 1
        nodes += 1
        if nodes > budget:
            return -1, assign, nodes
        if p == M - 1:
            return 1, assign, nodes
        stack.append(candidates(p + 1))
        cursor.append(0)
    return 0, assign, nodes


def scan_encoding(cw, labels, threshold, pairs=None):
    cw = np.asarray(cw)
    labels = np.asarray(labels)
    if pairs is None:
        n = len(cw)
        for i in range(n - 1):
            rest = np.arange(i + 1, n)
            d = (cw[rest] != cw[i]).sum(axis=1)
            bad = np.nonzero((labels[rest] != labels[i]) & (d < threshold))[0]
            if len(bad):
                return i, int(rest[bad[0]])
        return None
    pairs = np.asarray(pairs)
    if len(pairs) == 0:
        return None
    a, b = pairs[:, 0], pairs[:, 1]
    d = (cw[a] != cw[b]).sum(axis=1)
    bad = np.nonzero((labels[a] != labels[b]) & (d < threshold))[0]
    if len(bad):
        return int(a[bad[0]]), int(b[bad[0]])
    return None


def scan_contraction(digits, image, labels):
    digits = np.asarray(digits)
    image = np.asarray(image)
    labels = np.asarray(labels)
    n = len(digits)
    img = digits[image]
    for i in range(n - 1):
        rest = np.arange(i + 1, n)
        d = (digits[rest] != digits[i]).sum(axis=1)
        dphi = (img[rest] != img[i]).sum(axis=1)
        bad = np.nonzero((labels[rest] != labels[i]) & (dphi > d))[0]
        if len(bad):
            return i, int(rest[bad[0]])
    return None
