"""Dense linear algebra over a prime field GF(p) on numpy integer arrays.

Every routine works on int64 arrays with entries in [0, p) and returns
fresh arrays.  Pivoting always takes the first usable row in index order, so
results are deterministic.
"""

from __future__ import annotations

import numpy as np


def _inverses(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for v in range(1, p):
        inv[v] = pow(v, p - 2, p)
    return inv


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` over GF(p) and its pivot columns."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    inv = _inverses(p)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * inv[m[r, c]]) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of {v : a v = 0} over GF(p), one vector per row.

    The basis is the standard one read off the RREF: one vector per free
    column, carrying a 1 in that column.
    """
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-r[i, fc]) % p
    return basis


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    r, pivots = rref(np.hstack([a % p, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular over GF(p)")
    return r[:, n:]


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a x = b (b a vector), or None if inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    aug = np.hstack([a % p, (np.asarray(b, dtype=np.int64) % p)[:, None]])
    r, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols]
    return x


def batch_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices, shape (B, rows, cols), over GF(p).

    Gauss-Jordan without row swaps: a row, once used as a pivot, is masked
    out, and every pivot column is cleared in all other rows.
    """
    m = np.array(mats, dtype=np.int64) % p
    nb, rows, cols = m.shape
    inv = _inverses(p)
    used = np.zeros((nb, rows), dtype=bool)
    ranks = np.zeros(nb, dtype=np.int64)
    bidx = np.arange(nb)
    for c in range(cols):
        cand = (m[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = bidx[has]
        prow = np.argmax(cand[has], axis=1)
        pivot_rows = m[sel, prow, :]
        pivot_rows = (pivot_rows * inv[pivot_rows[:, c]][:, None]) % p
        factors = m[sel, :, c].copy()
        factors[np.arange(sel.size), prow] = 0
        m[sel] = (m[sel] - factors[:, :, None] * pivot_rows[:, None, :]) % p
        m[sel, prow, :] = pivot_rows
        used[sel, prow] = True
        ranks[sel] += 1
    return ranks
