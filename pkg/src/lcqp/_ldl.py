"""Numba kernels for the sparse LDL' factorization.

Up-looking LDL' of a symmetric matrix given by its upper triangle in CSC
form, following the elimination-tree approach used by serial LDL codes.
No pivoting: intended for (regularized) quasi-definite systems where the
factorization exists for any symmetric permutation.
"""

import numpy as np
from numba import njit

BREAKDOWN_TOL = 1e-13


@njit(cache=True)
def etree(n, Ap, Ai):
    """Elimination tree of the upper-triangular pattern (parent array)."""
    parent = np.full(n, -1, dtype=np.int64)
    ancestor = np.full(n, -1, dtype=np.int64)
    for k in range(n):
        for ptr in range(Ap[k], Ap[k + 1]):
            i = Ai[ptr]
            while i != -1 and i < k:
                inext = ancestor[i]
                ancestor[i] = k
                if inext == -1:
                    parent[i] = k
                i = inext
    return parent


@njit(cache=True)
def symbolic(n, Ap, Ai, parent):
    """Column counts of L (strictly lower part) and the column pointers."""
    Lnz = np.zeros(n, dtype=np.int64)
    flag = np.full(n, -1, dtype=np.int64)
    for k in range(n):
        flag[k] = k
        for ptr in range(Ap[k], Ap[k + 1]):
            i = Ai[ptr]
            while i != k and flag[i] != k:
                Lnz[i] += 1
                flag[i] = k
                i = parent[i]
    Lp = np.zeros(n + 1, dtype=np.int64)
    for j in range(n):
        Lp[j + 1] = Lp[j] + Lnz[j]
    return Lp


@njit(cache=True)
def factor(n, Ap, Ai, Ax, parent, Lp, reg):
    """Numeric factorization P A P' + diag(reg) = L D L'.

    Returns (Li, Lx, D, fail) where fail is the elimination index of a
    pivot with |d| < BREAKDOWN_TOL, or -1 on success.
    """
    nnz = Lp[n]
    Li = np.empty(nnz, dtype=np.int64)
    Lx = np.empty(nnz, dtype=np.float64)
    D = np.zeros(n, dtype=np.float64)
    Lnext = Lp[:n].copy()
    y = np.zeros(n, dtype=np.float64)
    pattern = np.empty(n, dtype=np.int64)
    flag = np.full(n, -1, dtype=np.int64)

    for k in range(n):
        flag[k] = k
        diag = reg[k]
        length = 0
        for ptr in range(Ap[k], Ap[k + 1]):
            i = Ai[ptr]
            if i == k:
                diag += Ax[ptr]
                continue
            y[i] += Ax[ptr]
            while flag[i] != k:
                pattern[length] = i
                length += 1
                flag[i] = k
                i = parent[i]
        # Ascending order is topological for the elimination tree.
        pat = np.sort(pattern[:length])
        for idx in range(length):
            j = pat[idx]
            yj = y[j]
            y[j] = 0.0
            for q in range(Lp[j], Lnext[j]):
                y[Li[q]] -= Lx[q] * yj
            l_kj = yj / D[j]
            diag -= yj * l_kj
            Li[Lnext[j]] = k
            Lx[Lnext[j]] = l_kj
            Lnext[j] += 1
        if abs(diag) < BREAKDOWN_TOL:
            return Li, Lx, D, k
        D[k] = diag
    return Li, Lx, D, -1


@njit(cache=True)
def solve(n, Lp, Li, Lx, D, x):
    """In-place solve of L D L' x = b given x = b on entry."""
    for j in range(n):
        xj = x[j]
        if xj != 0.0:
            for q in range(Lp[j], Lp[j + 1]):
                x[Li[q]] -= Lx[q] * xj
    for j in range(n):
        x[j] /= D[j]
    for j in range(n - 1, -1, -1):
        acc = x[j]
        for q in range(Lp[j], Lp[j + 1]):
            acc -= Lx[q] * x[Li[q]]
        x[j] = acc


@njit(cache=True)
def solve_lt(n, Lp, Li, Lx, x):
    """In-place backward solve L' x = b given x = b on entry."""
    for j in range(n - 1, -1, -1):
        acc = x[j]
        for q in range(Lp[j], Lp[j + 1]):
            acc -= Lx[q] * x[Li[q]]
        x[j] = acc


@njit(cache=True)
def sym_matvec(n, Ap, Ai, Ax, x, out):
    """out = M x for M stored as its upper triangle in CSC."""
    out[:] = 0.0
    for j in range(n):
        xj = x[j]
        for ptr in range(Ap[j], Ap[j + 1]):
            i = Ai[ptr]
            v = Ax[ptr]
            out[i] += v * xj
            if i != j:
                out[j] += v * x[i]
