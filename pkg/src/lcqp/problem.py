"""Problem data for linear-complementarity quadratic programs.

The problem class is

    minimize    0.5 z'Qz + g'z
    subject to  A z + b >= 0
                s = L z + l,  t = R z + r
                0 <= s  perp  t >= 0        (elementwise)

with z in R^n, m linear inequalities and p complementarity pairs.  Either
constraint class may be empty; p = 0 degenerates to a standard QP.
"""

from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, NonFiniteEntry, NonSymmetricQ

__all__ = [
    "LcqpProblem",
    "ViolationReport",
    "build_problem",
    "validate",
    "objective",
    "violations",
]

_SYM_TOL = 1e-12


@dataclass
class LcqpProblem:
    """Validated, immutable LCQP data.

    ``Q`` is stored as the upper triangle (CSC) of the symmetrized cost
    matrix; ``A``, ``L``, ``R`` are CSR for fast products.  Instances are
    safe to share across threads; nothing mutates them after validation.
    """

    n: int
    m: int
    p: int
    Q: sp.csc_array          # upper triangle, canonical
    g: np.ndarray
    A: sp.csr_array
    b: np.ndarray
    L: sp.csr_array
    l: np.ndarray
    R: sp.csr_array
    r: np.ndarray
    name: str = ""

    def __post_init__(self):
        # Full symmetric Q cached once for objective/gradient products.
        upper = self.Q.tocsr()
        full = upper + upper.T
        full.setdiag(full.diagonal() - upper.diagonal())
        self._Q_full = full.tocsr()

    def q_full(self):
        """Full symmetric cost matrix (CSR)."""
        return self._Q_full

    def grad(self, z):
        """Gradient of the objective, Qz + g."""
        return self._Q_full @ z + self.g


@dataclass(frozen=True)
class ViolationReport:
    """Constraint violation metrics at a candidate point.

    eq_viol    max-norm of the slack-definition residuals |Lz+l-s|,
               |Rz+r-t|, |Az+b-w| when reported slacks are supplied
               (0.0 when checking a bare z, which has no slack defects).
    ineq_viol  worst negative part among Az+b, Lz+l and Rz+r.
    comp_viol  max_i min(max(s_i,0), max(t_i,0)) with s,t recomputed
               from z; zero exactly on the L-shaped complementarity set.
    """

    eq_viol: float
    ineq_viol: float
    comp_viol: float

    def passes(self, eps_eq, eps_ineq, eps_comp):
        return (
            self.eq_viol <= eps_eq
            and self.ineq_viol <= eps_ineq
            and self.comp_viol <= eps_comp
        )

    def worst(self):
        return max(self.eq_viol, self.ineq_viol, self.comp_viol)


def _as_sparse(M, rows, cols, what):
    if M is None:
        M = sp.csr_array((rows, cols))
    elif not sp.issparse(M):
        M = sp.csr_array(np.atleast_2d(np.asarray(M, dtype=float)))
    else:
        M = sp.csr_array(M)
    if M.shape != (rows, cols):
        raise DimensionMismatch(f"{what} has shape {M.shape}, expected {(rows, cols)}")
    if M.nnz and not np.all(np.isfinite(M.data)):
        raise NonFiniteEntry(f"{what} contains non-finite entries")
    M = M.astype(float)
    M.sum_duplicates()
    return M


def _as_vector(v, length, what):
    v = np.zeros(length) if v is None else np.asarray(v, dtype=float).ravel()
    if v.shape != (length,):
        raise DimensionMismatch(f"{what} has length {v.shape[0]}, expected {length}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteEntry(f"{what} contains non-finite entries")
    return v


def build_problem(Q, g, A=None, b=None, L=None, l=None, R=None, r=None, name=""):
    """Assemble and validate an LCQP from dense, sparse or triplet data.

    ``Q`` may be given as the full symmetric matrix or as its upper
    triangle (detected by an empty strict lower part).  Dimensions are
    inferred from ``g`` and the constraint blocks.
    """
    g = np.asarray(g, dtype=float).ravel()
    n = g.shape[0]
    m = _nrows(A, b)
    p = _nrows(L, l)
    p_r = _nrows(R, r)
    if p != p_r:
        raise DimensionMismatch(f"L/l declare {p} pairs but R/r declare {p_r}")
    raw = LcqpProblem(
        n=n, m=m, p=p,
        Q=_as_sparse(Q, n, n, "Q").tocsc(),
        g=_as_vector(g, n, "g"),
        A=_as_sparse(A, m, n, "A"),
        b=_as_vector(b, m, "b"),
        L=_as_sparse(L, p, n, "L"),
        l=_as_vector(l, p, "l"),
        R=_as_sparse(R, p, n, "R"),
        r=_as_vector(r, p, "r"),
        name=name,
    )
    return validate(raw)


def _nrows(M, v):
    if M is not None:
        return M.shape[0] if sp.issparse(M) else np.atleast_2d(np.asarray(M)).shape[0]
    if v is not None:
        return np.asarray(v).ravel().shape[0]
    return 0


def validate(problem):
    """Check dimensions, symmetry and finiteness; canonicalize Q.

    Returns a new problem whose ``Q`` holds the upper triangle of the
    symmetrized cost.  Idempotent: validating a validated problem is a
    no-op on all numeric content.
    """
    n, m, p = problem.n, problem.m, problem.p
    if n < 0 or m < 0 or p < 0:
        raise DimensionMismatch(f"negative dimensions (n={n}, m={m}, p={p})")

    Q = _as_sparse(problem.Q, n, n, "Q").tocsc()
    g = _as_vector(problem.g, n, "g")
    A = _as_sparse(problem.A, m, n, "A")
    b = _as_vector(problem.b, m, "b")
    L = _as_sparse(problem.L, p, n, "L")
    l = _as_vector(problem.l, p, "l")
    R = _as_sparse(problem.R, p, n, "R")
    r = _as_vector(problem.r, p, "r")

    lower = sp.tril(Q, k=-1)
    if lower.nnz == 0:
        # Already (or given as) an upper triangle of a symmetric matrix.
        upper = sp.triu(Q).tocsc()
    else:
        gap = np.abs(Q - Q.T)
        scale = max(1.0, np.max(np.abs(Q.data)) if Q.nnz else 0.0)
        if gap.nnz and gap.max() > _SYM_TOL * scale:
            raise NonSymmetricQ(
                f"max asymmetry {gap.max():.3e} exceeds {_SYM_TOL:.0e} * {scale:.3e}"
            )
        upper = sp.triu((Q + Q.T) * 0.5).tocsc()
    upper.sum_duplicates()
    upper.sort_indices()

    return replace(problem, Q=upper, g=g, A=A, b=b, L=L, l=l, R=R, r=r)


def objective(problem, z):
    """Objective value 0.5 z'Qz + g'z."""
    z = _as_vector(z, problem.n, "z")
    return 0.5 * float(z @ (problem.q_full() @ z)) + float(problem.g @ z)


def violations(problem, z, s=None, t=None, w=None):
    """Constraint violation metrics at ``z``.

    ``s``, ``t``, ``w`` are optional reported slacks (from a solver result);
    when given, ``eq_viol`` measures how far they drift from their defining
    affine expressions.  Inequality and complementarity metrics always use
    the affine values recomputed from ``z``.
    """
    z = _as_vector(z, problem.n, "z")
    w_aff = problem.A @ z + problem.b
    s_aff = problem.L @ z + problem.l
    t_aff = problem.R @ z + problem.r

    ineq = 0.0
    for vals in (w_aff, s_aff, t_aff):
        if vals.size:
            ineq = max(ineq, float(np.max(np.maximum(-vals, 0.0))))

    comp = 0.0
    if problem.p:
        comp = float(np.max(np.minimum(np.maximum(s_aff, 0.0), np.maximum(t_aff, 0.0))))

    eq = 0.0
    for aff, rep, what in ((s_aff, s, "s"), (t_aff, t, "t"), (w_aff, w, "w")):
        if rep is not None:
            rep = _as_vector(rep, aff.shape[0], what)
            if aff.size:
                eq = max(eq, float(np.max(np.abs(aff - rep))))

    return ViolationReport(eq_viol=eq, ineq_viol=ineq, comp_viol=comp)
