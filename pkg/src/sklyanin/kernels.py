"""Hot mod-p linear algebra kernels.

Two interchangeable implementations of row reduction over F_p: a numba
@njit version and a vectorised pure-numpy version.  Selection is by the
environment variable SKLYANIN_KERNELS:

    auto   (default) numba when importable, numpy otherwise
    numba  force numba, error if unavailable
    numpy  force the pure-numpy path

Everything works on int64 arrays with entries in [0, p).  p is capped at
2**25 by the config layer so that products and the accumulations below
stay inside int64.

`benchmarks/bench_kernels.py` compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

_MODE = os.environ.get("SKLYANIN_KERNELS", "auto").lower()
if _MODE not in ("auto", "numba", "numpy"):
    raise ValueError(f"SKLYANIN_KERNELS must be auto|numba|numpy, got {_MODE!r}")

NUMBA_AVAILABLE = False
if _MODE in ("auto", "numba"):
    try:
        from numba import njit

        NUMBA_AVAILABLE = True
    except ImportError:
        if _MODE == "numba":
            raise ImportError("SKLYANIN_KERNELS=numba but numba is not installed")


def rref_numpy(a: np.ndarray, p: int):
    """Reduced row echelon form of `a` mod p.

    Returns (r, pivots): r has one row per pivot, leading entries 1,
    pivot columns cleared above and below, pivot columns strictly
    increasing.  Input is not modified.
    """
    a = np.array(a, dtype=np.int64, copy=True) % p
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        a -= np.outer(col, a[r])
        a %= p
        pivots.append(c)
        r += 1
    return a[:r], np.array(pivots, dtype=np.int64)


def matmul_numpy(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p, exact in int64."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    # inner-dim * p^2 must stay below 2^63
    assert a.shape[-1] * p * p < (1 << 62), "modulus too large for direct matmul"
    return (a @ b) % p


if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _pow_mod(base, e, p):
        result = 1
        base %= p
        while e > 0:
            if e & 1:
                result = result * base % p
            base = base * base % p
            e >>= 1
        return result

    @njit(cache=True)
    def _rref_numba(a, p):
        m, n = a.shape
        pivots = np.empty(min(m, n), dtype=np.int64)
        r = 0
        for c in range(n):
            if r == m:
                break
            piv = -1
            for i in range(r, m):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(n):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            inv = _pow_mod(a[r, c], p - 2, p)
            for j in range(c, n):
                a[r, j] = a[r, j] * inv % p
            for i in range(m):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(c, n):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            pivots[r] = c
            r += 1
        return a[:r].copy(), pivots[:r].copy()

    def rref_numba(a: np.ndarray, p: int):
        a = np.array(a, dtype=np.int64, copy=True) % p
        if a.size == 0:
            return a[:0], np.empty(0, dtype=np.int64)
        return _rref_numba(a, p)

    @njit(cache=True)
    def _matmul_numba(a, b, p):
        m, k = a.shape
        n = b.shape[1]
        out = np.zeros((m, n), dtype=np.int64)
        for i in range(m):
            for t in range(k):
                v = a[i, t]
                if v != 0:
                    for j in range(n):
                        out[i, j] = (out[i, j] + v * b[t, j]) % p
        return out

    def matmul_numba(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
        a = np.ascontiguousarray(a, dtype=np.int64)
        b = np.ascontiguousarray(b, dtype=np.int64)
        return _matmul_numba(a, b, p)

    rref_mod = rref_numba
    matmul_mod = matmul_numba
    ACTIVE = "numba"
else:
    rref_mod = rref_numpy
    matmul_mod = matmul_numpy
    ACTIVE = "numpy"
