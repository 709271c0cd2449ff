# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.  Signatures mirror :mod:`fcpc._kernels_py` exactly."""

import numpy as np

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline long long _dist(const unsigned char[:, ::1] digits, long long a, long long b,
                            Py_ssize_t r, bint binary) noexcept nogil:
    cdef long long d = 0
    cdef Py_ssize_t i
    if binary:
        return __builtin_popcountll(<unsigned long long>(a ^ b))
    for i in range(r):
        if digits[a, i] != digits[b, i]:
            d += 1
    return d


def dfs_dcode(const unsigned char[:, ::1] digits,
              const long long[::1] pred_ptr, const long long[::1] pred_idx, const long long[::1] pred_req,
              const long long[::1] cand1, const long long[::1] cand2_ptr, const long long[::1] cand2,
              long long budget, bint binary, bint symmetry=True):
    """Depth-first D-code search in a fixed position order.

    Position 0 holds the zero word, position 1 draws from ``cand1``, position 2
    from the block of ``cand2`` selected by the weight of the position-1 word,
    and later positions from every word in rank order.  With ``symmetry``
    off every position after the first ranges over all words.  Returns
    ``(status, assignment, nodes)`` with status 1 = found, 0 = refuted,
    -1 = budget exhausted.
    """
    cdef Py_ssize_t M = pred_ptr.shape[0] - 1
    cdef Py_ssize_t r = digits.shape[1]
    cdef long long nw = digits.shape[0]
    assign_arr = np.zeros(M, dtype=np.int64)
    cursor_arr = np.zeros(M, dtype=np.int64)
    cdef long long[::1] assign = assign_arr
    cdef long long[::1] cursor = cursor_arr
    cdef long long nodes = 1
    cdef Py_ssize_t p, e
    cdef long long c, lo, hi, w, i
    cdef bint ok, found
    if M <= 1:
        return 1, assign_arr, nodes
    with nogil:
        p = 1
        cursor[1] = 0
        while p >= 1:
            if not symmetry or p > 2:
                lo = 0
                hi = nw
            elif p == 1:
                lo = 0
                hi = cand1.shape[0]
            else:
                w = 0
                for i in range(r):
                    if digits[assign[1], i] != 0:
                        w += 1
                lo = cand2_ptr[w]
                hi = cand2_ptr[w + 1]
            found = False
            while lo + cursor[p] < hi:
                if not symmetry or p > 2:
                    c = cursor[p]
                elif p == 1:
                    c = cand1[cursor[p]]
                else:
                    c = cand2[lo + cursor[p]]
                cursor[p] += 1
                ok = True
                for e in range(pred_ptr[p], pred_ptr[p + 1]):
                    if _dist(digits, c, assign[pred_idx[e]], r, binary) < pred_req[e]:
                        ok = False
                        break
                if ok:
                    assign[p] = c
                    found = True
                    break
            if found:
                nodes += 1
                if nodes > budget:
                    break
                if p == M - 1:
                    break
                p += 1
                cursor[p] = 0
            else:
                p -= 1
    if p < 1:
        return 0, assign_arr, nodes
    if nodes > budget:
        return -1, assign_arr, nodes
    return 1, assign_arr, nodes


def scan_encoding(const unsigned char[:, ::1] cw, const long long[::1] labels, long long threshold,
                  const long long[:, ::1] pairs=None):
    """First cross-block pair (i, j) with distance below ``threshold``.

    With ``pairs`` given only those index pairs are examined; otherwise all
    i < j in lexicographic order.
    """
    cdef Py_ssize_t n = cw.shape[0]
    cdef Py_ssize_t L = cw.shape[1]
    cdef Py_ssize_t i, j, x, e
    cdef long long d
    cdef long long bi = -1, bj = -1
    with nogil:
        if pairs is None:
            for i in range(n):
                for j in range(i + 1, n):
                    if labels[i] == labels[j]:
                        continue
                    d = 0
                    for x in range(L):
                        if cw[i, x] != cw[j, x]:
                            d += 1
                    if d < threshold:
                        bi = i
                        bj = j
                        break
                if bi >= 0:
                    break
        else:
            for e in range(pairs.shape[0]):
                i = pairs[e, 0]
                j = pairs[e, 1]
                if labels[i] == labels[j]:
                    continue
                d = 0
                for x in range(L):
                    if cw[i, x] != cw[j, x]:
                        d += 1
                if d < threshold:
                    bi = i
                    bj = j
                    break
    if bi < 0:
        return None
    return int(bi), int(bj)


def scan_contraction(const unsigned char[:, ::1] digits, const long long[::1] image,
                     const long long[::1] labels):
    """First cross-block pair (i, j), i < j, whose images are farther apart than they are."""
    cdef Py_ssize_t n = digits.shape[0]
    cdef Py_ssize_t k = digits.shape[1]
    cdef Py_ssize_t i, j, x
    cdef long long d, dphi, a, b
    cdef long long bi = -1, bj = -1
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                if labels[i] == labels[j]:
                    continue
                a = image[i]
                b = image[j]
                d = 0
                dphi = 0
                for x in range(k):
                    if digits[i, x] != digits[j, x]:
                        d += 1
                    if digits[a, x] != digits[b, x]:
                        dphi += 1
                if dphi > d:
                    bi = i
                    bj = j
                    break
            if bi >= 0:
                break
    if bi < 0:
        return None
    return int(bi), int(bj)
