"""Sparse symmetric quasi-definite LDL' factorization and Ruiz scaling.

Matrices are stored as the upper triangle in compressed-column form.  The
factorization reports the inertia of D, which the solver uses to decide
whether a Newton system needs diagonal regularization.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _ldl
from .errors import DimensionMismatch, ZeroPivotError

__all__ = [
    "SparseSymMatrix",
    "LdlFactors",
    "LdlSymbolic",
    "ruiz_equilibrate",
    "ldl_factor",
    "ldl_solve",
    "expected_inertia",
]


@dataclass
class SparseSymMatrix:
    """Upper triangle of a symmetric matrix in CSC layout.

    Row indices are strictly increasing within each column, only entries
    with row <= col are stored, and there are no duplicates.
    """

    dim: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    @classmethod
    def from_triplets(cls, dim, rows, cols, vals):
        """Canonicalize (row <= col) triplets; duplicate entries are summed."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        if rows.shape != cols.shape or rows.shape != vals.shape:
            raise DimensionMismatch("triplet arrays must have matching length")
        if rows.size and (rows.min() < 0 or cols.max() >= dim):
            raise DimensionMismatch("triplet index out of range")
        if np.any(rows > cols):
            raise DimensionMismatch("entry below the diagonal in symmetric storage")
        coo = sp.coo_array((vals, (rows, cols)), shape=(dim, dim))
        return cls.from_scipy_upper(coo)

    @classmethod
    def from_scipy_upper(cls, M):
        """Wrap a scipy sparse matrix that already holds only the upper part."""
        csc = sp.csc_array(M)
        csc.sum_duplicates()
        csc.sort_indices()
        return cls(
            dim=M.shape[0],
            indptr=csc.indptr.astype(np.int64),
            indices=csc.indices.astype(np.int64),
            data=csc.data.astype(np.float64),
        )

    @classmethod
    def from_dense(cls, M):
        M = np.asarray(M, dtype=float)
        iu = np.triu_indices(M.shape[0])
        mask = M[iu] != 0.0
        return cls.from_triplets(M.shape[0], iu[0][mask], iu[1][mask], M[iu][mask])

    def to_dense(self):
        U = sp.csc_array(
            (self.data, self.indices, self.indptr), shape=(self.dim, self.dim)
        ).toarray()
        return U + U.T - np.diag(np.diag(U))

    def matvec(self, x):
        out = np.empty(self.dim)
        _ldl.sym_matvec(self.dim, self.indptr, self.indices, self.data, x, out)
        return out

    def entry_cols(self):
        """Column index of each stored entry (same order as ``data``)."""
        return np.repeat(np.arange(self.dim), np.diff(self.indptr))

    def scaled(self, d):
        """Return D M D for a diagonal scaling vector d (same pattern)."""
        cols = self.entry_cols()
        return SparseSymMatrix(
            self.dim, self.indptr, self.indices, self.data * d[self.indices] * d[cols]
        )


@dataclass
class LdlFactors:
    """Unit lower factor, diagonal, permutation and inertia of P(M+reg)P'."""

    dim: int
    Lp: np.ndarray
    Li: np.ndarray
    Lx: np.ndarray
    D: np.ndarray
    perm: np.ndarray
    inertia: tuple

    def solve(self, rhs):
        """Solve (M + reg) x = rhs using the stored factors."""
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape != (self.dim,):
            raise DimensionMismatch(f"rhs has shape {rhs.shape}, expected ({self.dim},)")
        x = rhs[self.perm].copy()
        _ldl.solve(self.dim, self.Lp, self.Li, self.Lx, self.D, x)
        out = np.empty_like(x)
        out[self.perm] = x
        return out

    def curvature_direction(self, k_perm):
        """Direction d = P' L^-T e_k with d' (M+reg) d = D[k] (negative when
        the pivot is); used to step off saddle points."""
        x = np.zeros(self.dim)
        x[k_perm] = 1.0
        _ldl.solve_lt(self.dim, self.Lp, self.Li, self.Lx, x)
        out = np.empty_like(x)
        out[self.perm] = x
        return out


def ldl_solve(factors, rhs):
    """Module-level alias for :meth:`LdlFactors.solve`."""
    return factors.solve(rhs)


def _permute_upper(M, perm):
    """Symmetric permutation of upper-triangle storage: rows/cols -> perm^-1."""
    iperm = np.empty_like(perm)
    iperm[perm] = np.arange(M.dim)
    rows = iperm[M.indices]
    cols = iperm[M.entry_cols()]
    lo = np.minimum(rows, cols)
    hi = np.maximum(rows, cols)
    return SparseSymMatrix.from_triplets(M.dim, lo, hi, M.data)


class LdlSymbolic:
    """Reusable symbolic analysis for repeated factorizations.

    The sparsity pattern (and optional permutation) of a KKT matrix is
    fixed across Newton iterations; this caches the permuted pattern, the
    value-permutation map, the elimination tree and the column counts, so
    each numeric factorization is a single kernel call.
    """

    def __init__(self, M, perm=None):
        n = M.dim
        self.dim = n
        if perm is None:
            perm = np.arange(n, dtype=np.int64)
        self.perm = np.asarray(perm, dtype=np.int64)
        iperm = np.empty_like(self.perm)
        iperm[self.perm] = np.arange(n)
        rows = iperm[M.indices]
        cols = iperm[M.entry_cols()]
        lo = np.minimum(rows, cols)
        hi = np.maximum(rows, cols)
        order = np.lexsort((lo, hi))
        self._data_map = order
        self.indices = lo[order]
        counts = np.bincount(hi[order], minlength=n)
        self.indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.parent = _ldl.etree(n, self.indptr, self.indices)
        self.Lp = _ldl.symbolic(n, self.indptr, self.indices, self.parent)

    def factor(self, data, delta=0.0, reg_pattern=None, reg=None):
        """Numeric factorization of the matrix holding ``data`` values.

        The diagonal shift is ``reg`` (full vector) if given, otherwise
        ``delta * reg_pattern``.
        """
        n = self.dim
        if reg is None:
            if reg_pattern is None:
                reg = np.zeros(n)
            else:
                reg = delta * np.asarray(reg_pattern, dtype=float)
        else:
            reg = np.asarray(reg, dtype=float)
        if reg.shape != (n,):
            raise DimensionMismatch("regularization length must equal matrix order")
        Li, Lx, D, fail = _ldl.factor(
            n, self.indptr, self.indices, data[self._data_map],
            self.parent, self.Lp, reg[self.perm],
        )
        if fail >= 0:
            raise ZeroPivotError(int(fail))
        npos = int(np.sum(D > 0.0))
        nneg = int(np.sum(D < 0.0))
        return LdlFactors(
            dim=n, Lp=self.Lp, Li=Li, Lx=Lx, D=D, perm=self.perm,
            inertia=(npos, nneg, n - npos - nneg),
        )


def ldl_factor(M, delta=0.0, reg_pattern=None, perm=None, symbolic=None, reg=None):
    """Factor M + delta*diag(reg_pattern) = L D L' and report inertia.

    ``reg_pattern`` assigns the sign of the shift per row (+1 on primal
    rows, 0 or -1 on dual rows); omitted means no regularization.  ``perm``
    is an optional fill-reducing permutation (natural order by default);
    pass a cached :class:`LdlSymbolic` to skip the symbolic analysis, and
    ``reg`` to supply the full shift vector directly.
    Raises :class:`ZeroPivotError` when a pivot magnitude falls below the
    breakdown threshold; the caller is expected to escalate ``delta``.
    """
    if symbolic is None:
        symbolic = LdlSymbolic(M, perm)
    return symbolic.factor(M.data, delta=delta, reg_pattern=reg_pattern, reg=reg)


def ruiz_equilibrate(M, max_iters=20, tol=0.1):
    """Symmetric Ruiz scaling driving row infinity-norms toward one.

    Returns ``(d, M_scaled)`` with ``M_scaled = diag(d) M diag(d)``.  Rows
    that are structurally zero keep scale 1.  Iteration stops when every
    nonzero row norm is within ``tol`` of 1 or after ``max_iters`` rounds.
    """
    n = M.dim
    d = np.ones(n)
    rows = M.indices
    cols = M.entry_cols()
    vals = M.data.copy()
    for _ in range(max_iters):
        norms = np.zeros(n)
        if vals.size:
            av = np.abs(vals)
            np.maximum.at(norms, rows, av)
            np.maximum.at(norms, cols, av)
        active = norms > 0.0
        if not active.any() or np.max(np.abs(1.0 - norms[active])) <= tol:
            break
        step = np.ones(n)
        step[active] = 1.0 / np.sqrt(norms[active])
        d *= step
        vals *= step[rows] * step[cols]
    return d, SparseSymMatrix(n, M.indptr, M.indices, vals)


def expected_inertia(n, m, p):
    """Inertia of a correct Newton system: primal blocks (z, v, sigma)
    positive, dual blocks (lambda_w, lambda_sigma) negative."""
    return (n + m + p, m + 2 * p, 0)
