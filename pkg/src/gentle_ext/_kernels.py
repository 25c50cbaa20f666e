"""Dense rank kernels over a prime field.

The numba path is used when numba imports cleanly and the environment
variable ``GENTLE_EXT_DISABLE_NUMBA`` is unset (or ``0``).  Both code paths
are always importable so they can be benchmarked against each other.
"""
from __future__ import annotations

import os

import numpy as np

DISABLE_ENV = "GENTLE_EXT_DISABLE_NUMBA"


def _numba_requested() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip() in ("", "0")


try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is optional
    njit = None

HAVE_NUMBA = njit is not None
USE_NUMBA = HAVE_NUMBA and _numba_requested()


def _rank_mod_p_loops(a, p):
    # a: int64 2-D array with entries in [0, p); modified in place
    m, n = a.shape
    rank = 0
    row = 0
    for col in range(n):
        if row >= m:
            break
        piv = -1
        for i in range(row, m):
            if a[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            for j in range(col, n):
                tmp = a[row, j]
                a[row, j] = a[piv, j]
                a[piv, j] = tmp
        # inverse by Fermat
        inv = 1
        base = a[row, col] % p
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for j in range(col, n):
            a[row, j] = (a[row, j] * inv) % p
        for i in range(row + 1, m):
            f = a[i, col]
            if f != 0:
                for j in range(col, n):
                    a[i, j] = (a[i, j] - f * a[row, j]) % p
        row += 1
        rank += 1
    return rank


def rank_mod_p_numpy(a: np.ndarray, p: int) -> int:
    """Row-reduce with vectorised row updates; one Python iteration per pivot."""
    a = np.array(a, dtype=np.int64) % p
    m, n = a.shape
    row = 0
    for col in range(n):
        if row >= m:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        inv = pow(int(a[row, col]), p - 2, p)
        a[row, col:] = (a[row, col:] * inv) % p
        below = a[row + 1:, col].copy()
        hit = np.nonzero(below)[0]
        if hit.size:
            idx = row + 1 + hit
            a[idx, col:] = (a[idx, col:] - np.outer(below[hit], a[row, col:])) % p
        row += 1
    return row


if HAVE_NUMBA:
    _rank_mod_p_jit = njit(cache=False)(_rank_mod_p_loops)

    def rank_mod_p_numba(a: np.ndarray, p: int) -> int:
        work = np.array(a, dtype=np.int64) % p
        return int(_rank_mod_p_jit(work, np.int64(p)))
else:  # pragma: no cover
    rank_mod_p_numba = None


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank of an integer matrix reduced modulo the prime ``p`` (p < 2**31)."""
    if p >= 2 ** 31:
        raise ValueError("modulus must be below 2**31 to stay inside int64")
    if a.size == 0:
        return 0
    if USE_NUMBA:
        return rank_mod_p_numba(a, p)
    return rank_mod_p_numpy(a, p)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
