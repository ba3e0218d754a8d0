"""KKT residual and symmetrized Newton matrix for the relaxed subproblem.

The inner solver works on the variables (z, v, sigma, lambda_w,
lambda_sigma): v and sigma parameterize the inequality slack w = p(v) and
the complementarity pair (s, t) = (p(sigma), p(-sigma)) on the relaxed
curve, and the lambdas are the duals of the augmented-Lagrangian
feasibility rows.  The residual stacks five blocks:

    r1 = Qz + g + A'lam_w + J'lam_sig                 (stationarity in z)
    r2 = lam_w + p(-v)                                (log-domain IP row)
    r3 = -(dh/dsigma)' lam_sig                        (stationarity in sigma)
    r4 = (alpha - lam_w)/rho + Az + b - p(v)          (inequality feasibility)
    r5 = (beta - lam_sig)/rho + Jz + c - h(sigma)     (pair feasibility)

with J = [L; R], c = [l; r], h(sigma) = [p(sigma); p(-sigma)].  The Newton
matrix is the Jacobian of this system after scaling row 2 by -p'(v), which
makes it symmetric quasi-definite: positive diagonal blocks on (z, v,
sigma) up to curvature of the sigma block, and -I/rho on the dual blocks.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch
from .retraction import softplus, softplus_deriv, softplus_second_deriv
from .sparse import LdlSymbolic, SparseSymMatrix

__all__ = ["IterateState", "StackedConstraintData", "KktWorkspace"]


@dataclass
class IterateState:
    """Solver iterate plus the outer-loop parameters it was formed under."""

    z: np.ndarray
    v: np.ndarray
    sigma: np.ndarray
    lam_w: np.ndarray
    lam_sig: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    rho: float
    kappa: float

    def check(self, n, m, p):
        shapes = {
            "z": (self.z, n), "v": (self.v, m), "sigma": (self.sigma, p),
            "lam_w": (self.lam_w, m), "lam_sig": (self.lam_sig, 2 * p),
            "alpha": (self.alpha, m), "beta": (self.beta, 2 * p),
        }
        for name, (vec, size) in shapes.items():
            if vec.shape != (size,):
                raise DimensionMismatch(f"{name} has shape {vec.shape}, expected ({size},)")
        if not (self.rho > 0.0 and self.kappa > 0.0):
            raise ValueError("rho and kappa must be positive")

    def stepped(self, step, tau, layout):
        """New iterate at self + tau*step (multiplier estimates unchanged)."""
        n, m, p = layout
        return IterateState(
            z=self.z + tau * step[:n],
            v=self.v + tau * step[n:n + m],
            sigma=self.sigma + tau * step[n + m:n + m + p],
            lam_w=self.lam_w + tau * step[n + m + p:n + 2 * m + p],
            lam_sig=self.lam_sig + tau * step[n + 2 * m + p:],
            alpha=self.alpha, beta=self.beta, rho=self.rho, kappa=self.kappa,
        )

    def is_finite(self):
        return all(
            np.all(np.isfinite(v))
            for v in (self.z, self.v, self.sigma, self.lam_w, self.lam_sig)
        )


@dataclass
class StackedConstraintData:
    """Stacked complementarity Jacobian J = [L; R] and offset c = [l; r]."""

    J: sp.csr_array
    c: np.ndarray


class KktWorkspace:
    """Precomputed structure for residual evaluation and matrix assembly.

    The sparsity pattern of the Newton matrix depends only on the problem,
    so it is assembled symbolically once; per-iteration work just refreshes
    the numeric values.  Not thread-safe: one workspace per running solve.
    """

    def __init__(self, problem):
        self.problem = problem
        n, m, p = problem.n, problem.m, problem.p
        self.n, self.m, self.p = n, m, p
        self.dim = n + 2 * m + 3 * p
        self.off_v = n
        self.off_sig = n + m
        self.off_lw = n + m + p
        self.off_ls = n + 2 * m + p

        J = sp.vstack([problem.L, problem.R], format="csr") if p else sp.csr_array((0, n))
        self.stacked = StackedConstraintData(J=J, c=np.concatenate([problem.l, problem.r]))
        self.AT = problem.A.T.tocsr()
        self.JT = J.T.tocsr()

        # Primal rows carry +delta regularization; dual rows already have
        # the -I/rho block and are left alone.  The sign pattern backs the
        # static shift that keeps the factorization strictly quasi-definite.
        self.reg_pattern = np.zeros(self.dim)
        self.reg_pattern[: n + m + p] = 1.0
        self.sign_pattern = np.where(self.reg_pattern > 0.0, 1.0, -1.0)

        self._build_symbolic()

    def _build_symbolic(self):
        n, m, p = self.n, self.m, self.p
        qcoo = sp.coo_array(self.problem.Q)
        acoo = sp.coo_array(self.problem.A)
        jcoo = sp.coo_array(self.stacked.J)
        im = np.arange(m)
        ip = np.arange(p)
        i2p = np.arange(2 * p)

        rows = np.concatenate([
            qcoo.row,                      # Q upper in the z block
            acoo.col,                      # A' coupling (z, lam_w)
            jcoo.col,                      # J' coupling (z, lam_sig)
            self.off_v + im,               # v diagonal
            self.off_sig + ip,             # sigma diagonal
            self.off_v + im,               # (v, lam_w) diagonal coupling
            self.off_sig + ip,             # (sigma, lam_sig upper)
            self.off_sig + ip,             # (sigma, lam_sig lower)
            self.off_lw + im,              # lam_w diagonal
            self.off_ls + i2p,             # lam_sig diagonal
        ]).astype(np.int64)
        cols = np.concatenate([
            qcoo.col,
            self.off_lw + acoo.row,
            self.off_ls + jcoo.row,
            self.off_v + im,
            self.off_sig + ip,
            self.off_lw + im,
            self.off_ls + ip,
            self.off_ls + p + ip,
            self.off_lw + im,
            self.off_ls + i2p,
        ]).astype(np.int64)

        order = np.lexsort((rows, cols))
        srows, scols = rows[order], cols[order]
        if srows.size > 1:
            same = (np.diff(scols) == 0) & (np.diff(srows) == 0)
            if np.any(same):
                raise AssertionError("duplicate entry in KKT pattern")
        self._order = order
        self._indices = srows
        self._indptr = np.concatenate(
            [[0], np.cumsum(np.bincount(scols, minlength=self.dim))]
        ).astype(np.int64)

        self._vals = np.empty(rows.size)
        base = 0
        self._sl = {}
        for key, size in [
            ("q", qcoo.nnz), ("a", acoo.nnz), ("j", jcoo.nnz),
            ("dv", m), ("ds", p), ("vlw", m), ("slu", p), ("sll", p),
            ("lw", m), ("ls", 2 * p),
        ]:
            self._sl[key] = slice(base, base + size)
            base += size
        self._vals[self._sl["q"]] = qcoo.data
        self._vals[self._sl["a"]] = acoo.data
        self._vals[self._sl["j"]] = jcoo.data

        pattern = SparseSymMatrix(
            self.dim, self._indptr, self._indices, np.zeros(self._indices.size)
        )
        self.ldl_perm = self._pivot_order(pattern, qcoo)
        self.ldl_symbolic = LdlSymbolic(pattern, perm=self.ldl_perm)

    def _pivot_order(self, pattern, qcoo):
        """Fill-reducing elimination order, adjusted for safe pivots.

        Reverse Cuthill-McKee keeps the trajectory-banded structure tight.
        Primal rows with no structural diagonal (sigma rows, cost-free
        slack variables) would hit a zero pivot if eliminated before any
        of their dual neighbors, since only the dual Schur complements
        make their pivots positive; those rows are nudged to just after
        their earliest coupled dual row.
        """
        import scipy.sparse as _sp
        from scipy.sparse.csgraph import reverse_cuthill_mckee

        n, m, p = self.n, self.m, self.p
        dim = self.dim
        upper = _sp.csc_array(
            (np.ones(pattern.indices.size), pattern.indices, pattern.indptr),
            shape=(dim, dim),
        )
        full = (upper + upper.T).tocsr()
        order = reverse_cuthill_mckee(_sp.csr_matrix(full), symmetric_mode=True)
        key = np.empty(dim)
        key[order] = np.arange(dim, dtype=float)

        has_qdiag = np.zeros(n, dtype=bool)
        has_qdiag[qcoo.row[qcoo.row == qcoo.col]] = True
        needy = np.concatenate([
            np.where(~has_qdiag)[0],                   # cost-free z rows
            self.off_sig + np.arange(p),               # sigma rows
        ]).astype(int)
        dual_lo = self.off_lw
        indptr, indices = full.indptr, full.indices
        for i in needy:
            nbrs = indices[indptr[i]:indptr[i + 1]]
            duals = nbrs[nbrs >= dual_lo]
            if duals.size:
                first = np.min(key[duals])
                if key[i] < first:
                    key[i] = first + 0.4
        return np.argsort(key, kind="stable").astype(np.int64)

    # -- residual ---------------------------------------------------------

    def residual(self, state):
        """KKT residual (five stacked blocks) at the given iterate."""
        pr = self.problem
        state.check(self.n, self.m, self.p)
        z, v, sig = state.z, state.v, state.sigma
        lw, ls = state.lam_w, state.lam_sig
        k = state.kappa
        lu, ll = ls[: self.p], ls[self.p:]

        ps = softplus_deriv(sig, k) if self.p else np.empty(0)
        psm = softplus_deriv(-sig, k) if self.p else np.empty(0)
        h = np.concatenate([softplus(sig, k), softplus(-sig, k)]) if self.p else np.empty(0)

        r1 = pr.q_full() @ z + pr.g + self.AT @ lw + self.JT @ ls
        r2 = lw + softplus(-v, k) if self.m else np.empty(0)
        r3 = -(ps * lu) + psm * ll
        r4 = (
            (state.alpha - lw) / state.rho + pr.A @ z + pr.b - softplus(v, k)
            if self.m else np.empty(0)
        )
        r5 = (state.beta - ls) / state.rho + self.stacked.J @ z + self.stacked.c - h
        return np.concatenate([r1, r2, r3, r4, r5])

    def scale_residual(self, r, state):
        """Scale block 2 by -p'(v) so its Jacobian is the symmetric matrix."""
        out = r.copy()
        if self.m:
            pv = softplus_deriv(state.v, state.kappa)
            out[self.off_v:self.off_sig] *= -pv
        return out

    def theta_phi(self, r):
        """Filter measures: (feasibility blocks 4-5, stationarity blocks 1-3)."""
        split = self.off_lw
        phi = float(np.max(np.abs(r[:split]))) if split else 0.0
        theta = float(np.max(np.abs(r[split:]))) if r.size > split else 0.0
        return theta, phi

    # -- Newton matrix ----------------------------------------------------

    def assemble(self, state):
        """Symmetric quasi-definite Newton matrix at the iterate.

        Equals the Jacobian of the residual with row 2 scaled by -p'(v):
        diagonal blocks (Q, p'(v)p'(-v), -p''(sigma)(lam_u + lam_l),
        -I/rho, -I/rho) and couplings (A', J', -p'(v), -dh/dsigma').
        """
        m, p = self.m, self.p
        k = state.kappa
        sl, vals = self._sl, self._vals
        if m:
            pv = softplus_deriv(state.v, k)
            pvm = softplus_deriv(-state.v, k)
            vals[sl["dv"]] = pv * pvm
            vals[sl["vlw"]] = -pv
            vals[sl["lw"]] = -1.0 / state.rho
        if p:
            ps = softplus_deriv(state.sigma, k)
            psm = softplus_deriv(-state.sigma, k)
            pss = softplus_second_deriv(state.sigma, k)
            lu, ll = state.lam_sig[:p], state.lam_sig[p:]
            vals[sl["ds"]] = -pss * (lu + ll)
            vals[sl["slu"]] = -ps
            vals[sl["sll"]] = psm
            vals[sl["ls"]] = -1.0 / state.rho
        return SparseSymMatrix(self.dim, self._indptr, self._indices, vals[self._order])
