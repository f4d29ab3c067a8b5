"""Hot loops of modular linear algebra.

Every kernel exists twice: a numba ``@njit`` version and a pure numpy
version.  The numpy path is selected when ``FPP_NUMBA=0`` is set in the
environment or when numba cannot be imported.  Both paths take and return the
same arrays, so callers never branch on the backend.

All matrices hold int64 residues in [0, p) with p < 2**31, so a product of
two residues fits in int64 before reduction.
"""
from __future__ import annotations

import os

import numpy as np

MAX_PRIME = 2**31 - 1

_want_numba = os.environ.get("FPP_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _want_numba:
        raise ImportError("disabled by FPP_NUMBA")
    import numba

    njit = numba.njit(cache=True, nogil=True)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised with FPP_NUMBA=0
    numba = None
    HAVE_NUMBA = False


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy reference implementations


def _np_rref(M, p):
    """In-place reduced row echelon form; returns (rank, pivot columns)."""
    nrows, ncols = M.shape
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = M[r] * inv % p
        col = M[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            M[rows] = (M[rows] - np.outer(col[rows], M[r]) % p) % p
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


def _np_reduce_rows(b_ptr, b_cols, b_vals, a_ptr, a_cols, a_vals, pivot_row, out_cols, ncols, p):
    nb = b_ptr.shape[0] - 1
    out = np.zeros((nb, out_cols.shape[0]), dtype=np.int64)
    buf = np.zeros(ncols, dtype=np.int64)
    for i in range(nb):
        buf[:] = 0
        s, e = b_ptr[i], b_ptr[i + 1]
        buf[b_cols[s:e]] = b_vals[s:e]
        for c in range(ncols):
            f = buf[c]
            if f == 0:
                continue
            j = pivot_row[c]
            if j < 0:
                continue
            s2, e2 = a_ptr[j], a_ptr[j + 1]
            cols = a_cols[s2:e2]
            buf[cols] = (buf[cols] - f * a_vals[s2:e2]) % p
        out[i] = buf[out_cols]
    return out


def _np_matmul_mod(A, B, p):
    # object dtype avoids int64 overflow for long inner dimensions
    return (A.astype(object) @ B.astype(object) % p).astype(np.int64)


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @njit
    def _nb_inv(a, p):
        # extended Euclid; a in (0, p)
        t, newt = 0, 1
        r, newr = p, a
        while newr != 0:
            q = r // newr
            t, newt = newt, t - q * newt
            r, newr = newr, r - q * newr
        if t < 0:
            t += p
        return t

    @njit
    def _nb_rref(M, p):
        nrows, ncols = M.shape
        r = 0
        pivots = np.empty(min(nrows, ncols), dtype=np.int64)
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, ncols):
                    tmp = M[r, j]
                    M[r, j] = M[piv, j]
                    M[piv, j] = tmp
            inv = _nb_inv(M[r, c], p)
            for j in range(c, ncols):
                M[r, j] = M[r, j] * inv % p
            for i in range(nrows):
                if i == r:
                    continue
                f = M[i, c]
                if f == 0:
                    continue
                for j in range(c, ncols):
                    v = M[r, j]
                    if v != 0:
                        M[i, j] = (M[i, j] - f * v) % p
            pivots[r] = c
            r += 1
        return r, pivots[:r].copy()

    @njit
    def _nb_reduce_rows(b_ptr, b_cols, b_vals, a_ptr, a_cols, a_vals, pivot_row, out_cols, ncols, p):
        nb = b_ptr.shape[0] - 1
        nout = out_cols.shape[0]
        out = np.zeros((nb, nout), dtype=np.int64)
        buf = np.zeros(ncols, dtype=np.int64)
        for i in range(nb):
            for c in range(ncols):
                buf[c] = 0
            first = ncols
            for t in range(b_ptr[i], b_ptr[i + 1]):
                buf[b_cols[t]] = b_vals[t]
                if b_cols[t] < first:
                    first = b_cols[t]
            for c in range(first, ncols):
                f = buf[c]
                if f == 0:
                    continue
                j = pivot_row[c]
                if j < 0:
                    continue
                for t in range(a_ptr[j], a_ptr[j + 1]):
                    k = a_cols[t]
                    buf[k] = (buf[k] - f * a_vals[t]) % p
            for t in range(nout):
                out[i, t] = buf[out_cols[t]]
        return out

    @njit
    def _nb_matmul_mod(A, B, p):
        n, m = A.shape
        k = B.shape[1]
        C = np.zeros((n, k), dtype=np.int64)
        for i in range(n):
            for t in range(m):
                a = A[i, t]
                if a == 0:
                    continue
                for j in range(k):
                    C[i, j] = (C[i, j] + a * B[t, j]) % p
        return C


# ---------------------------------------------------------------------------
# public entry points


def _prep(M, p):
    if p > MAX_PRIME:
        raise ValueError(f"prime {p} too large for int64 kernels")
    return np.ascontiguousarray(np.asarray(M, dtype=np.int64) % p)


def rref(M, p: int):
    """Reduced row echelon form mod p.  Returns (R, rank, pivot_columns)."""
    A = _prep(M, p).copy()
    if A.size == 0:
        return A, 0, np.zeros(0, dtype=np.int64)
    if HAVE_NUMBA:
        r, piv = _nb_rref(A, p)
    else:
        r, piv = _np_rref(A, p)
    return A, int(r), piv


def rank(M, p: int) -> int:
    return rref(M, p)[1]


def reduce_rows(b_ptr, b_cols, b_vals, a_ptr, a_cols, a_vals, pivot_row, out_cols, ncols: int, p: int):
    """Reduce sparse rows B by pivot rows A (CSR, pivot first in each row).

    ``pivot_row[c]`` is the index of the A-row whose leading column is c, or
    -1.  Returns the dense block of the reduced B rows restricted to
    ``out_cols``.
    """
    args = (
        np.ascontiguousarray(b_ptr, dtype=np.int64),
        np.ascontiguousarray(b_cols, dtype=np.int64),
        np.ascontiguousarray(b_vals, dtype=np.int64),
        np.ascontiguousarray(a_ptr, dtype=np.int64),
        np.ascontiguousarray(a_cols, dtype=np.int64),
        np.ascontiguousarray(a_vals, dtype=np.int64),
        np.ascontiguousarray(pivot_row, dtype=np.int64),
        np.ascontiguousarray(out_cols, dtype=np.int64),
        int(ncols),
        int(p),
    )
    if HAVE_NUMBA:
        return _nb_reduce_rows(*args)
    return _np_reduce_rows(*args)


def matmul_mod(A, B, p: int):
    A = _prep(A, p)
    B = _prep(B, p)
    if HAVE_NUMBA:
        return _nb_matmul_mod(A, B, p)
    return _np_matmul_mod(A, B, p)


def nullspace(M, p: int):
    """Basis (as rows) of the right kernel of M mod p."""
    M = _prep(M, p)
    ncols = M.shape[1]
    R, r, piv = rref(M, p)
    pivset = set(int(c) for c in piv)
    free = [c for c in range(ncols) if c not in pivset]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for t, fcol in enumerate(free):
        basis[t, fcol] = 1
        for i, pc in enumerate(piv):
            basis[t, pc] = (-R[i, fcol]) % p
    return basis


def solve(M, b, p: int):
    """One solution x of M x = b mod p, or None when inconsistent."""
    M = _prep(M, p)
    b = _prep(np.asarray(b).reshape(-1, 1), p)
    aug = np.hstack([M, b])
    R, r, piv = rref(aug, p)
    ncols = M.shape[1]
    if r and piv[r - 1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for i in range(r):
        x[piv[i]] = R[i, ncols]
    return x


def det(M, p: int) -> int:
    A = _prep(M, p).copy()
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("det of a non-square matrix")
    d = 1
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if nz.size == 0:
            return 0
        i = c + nz[0]
        if i != c:
            A[[c, i]] = A[[i, c]]
            d = -d
        d = d * int(A[c, c]) % p
        inv = pow(int(A[c, c]), -1, p)
        f = A[c + 1 :, c] * inv % p
        A[c + 1 :] = (A[c + 1 :] - np.outer(f, A[c]) % p) % p
    return d % p
