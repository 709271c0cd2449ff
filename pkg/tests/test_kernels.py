import os
import subprocess
import sys

import numpy as np
import pytest

from fcpc import kernels

try:
    CY = kernels.backend("cython")
except ImportError:
    CY = None
PY = kernels.backend("python")

needs_cython = pytest.mark.skipif(CY is None, reason="compiled kernels not built")


def test_env_forces_fallback():
    code = "import fcpc.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, FCPC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.backend("fortran")


def _first_violation(cw, labels, threshold):
    n = len(cw)
    for i in range(n):
        for j in range(i + 1, n):
            if labels[i] != labels[j] and np.count_nonzero(cw[i] != cw[j]) < threshold:
                return i, j
    return None


@pytest.mark.parametrize("seed", range(20))
def test_scan_encoding_matches_brute(seed):
    rng = np.random.default_rng(seed)
    n, width = int(rng.integers(2, 40)), int(rng.integers(1, 8))
    q = int(rng.choice([2, 3]))
    cw = rng.integers(0, q, size=(n, width)).astype(np.uint8)
    labels = rng.integers(0, 4, size=n).astype(np.int64)
    thr = int(rng.integers(1, width + 2))
    want = _first_violation(cw, labels, thr)
    got = PY.scan_encoding(cw, labels, thr)
    assert (tuple(got) if got is not None else None) == want
    if CY is not None:
        got = CY.scan_encoding(cw, labels, thr)
        assert (tuple(got) if got is not None else None) == want


@needs_cython
@pytest.mark.parametrize("seed", range(20))
def test_scan_contraction_backends_agree(seed):
    rng = np.random.default_rng(100 + seed)
    n, k = 16, 4
    digits = np.array([[(r >> i) & 1 for i in range(k)] for r in range(n)], dtype=np.uint8)
    image = rng.integers(0, n, size=n).astype(np.int64)
    labels = rng.integers(0, 3, size=n).astype(np.int64)
    a = PY.scan_contraction(digits, image, labels)
    b = CY.scan_contraction(digits, image, labels)
    assert (tuple(a) if a is not None else None) == (tuple(b) if b is not None else None)
