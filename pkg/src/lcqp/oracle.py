"""Brute-force global reference for desk-scale LCQPs.

Enumerates all 2^p assignments of each complementarity pair to its
left-zero (s_i = 0) or right-zero (t_i = 0) branch, solves every branch as
a convex QP by dense enumeration of active sets, and returns the best
feasible solution.  Deliberately independent of the main solver: no shared
linear algebra, no shared iteration, so it can serve as the expected-value
engine in tests.

Intended for small instances (n <= ~10 variables, a handful of rows); the
active-set enumeration is exponential in the number of inequalities.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import OracleTooLarge

__all__ = ["PieceAssignment", "OracleResult", "solve_qp_active_set", "global_solve"]

_FEAS_TOL = 1e-9
_MULT_TOL = 1e-9


@dataclass(frozen=True)
class PieceAssignment:
    """Branch choice per pair: False fixes s_i = 0, True fixes t_i = 0."""

    right_zero: tuple

    @classmethod
    def from_index(cls, index, p):
        return cls(tuple(bool((index >> i) & 1) for i in range(p)))

    @property
    def index(self):
        return sum(1 << i for i, b in enumerate(self.right_zero) if b)


@dataclass
class OracleResult:
    status: str                    # "optimal" or "infeasible"
    z: np.ndarray | None
    objective: float
    assignment: PieceAssignment | None
    optimal_assignments: list      # every assignment tying the best objective
    piece_objectives: dict         # assignment index -> objective of feasible pieces
    piece_solutions: dict          # assignment index -> minimizer of that piece


def solve_qp_active_set(Q, g, E=None, e=None, G=None, h=None, feas_tol=_FEAS_TOL):
    """Globally solve min 0.5 z'Qz + g'z  s.t.  Ez + e = 0, Gz + h >= 0.

    Dense enumeration over active sets: for every subset of the inequality
    rows, solve the equality-constrained KKT system and keep candidates
    that are primal feasible with nonnegative active multipliers.  For
    convex Q every KKT point is a global minimizer, so the best candidate
    is the solution.  Returns (z, objective) or (None, inf) if no feasible
    KKT point exists (infeasible, or unbounded/degenerate beyond the scope
    of this oracle).
    """
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    n = Q.shape[0]
    g = np.asarray(g, dtype=float).ravel()
    E = np.zeros((0, n)) if E is None else np.atleast_2d(np.asarray(E, dtype=float))
    e = np.zeros(0) if e is None else np.asarray(e, dtype=float).ravel()
    G = np.zeros((0, n)) if G is None else np.atleast_2d(np.asarray(G, dtype=float))
    h = np.zeros(0) if h is None else np.asarray(h, dtype=float).ravel()
    mg = G.shape[0]

    best_z, best_obj = None, np.inf
    for k in range(mg + 1):
        for active in combinations(range(mg), k):
            GS = G[list(active)]
            hS = h[list(active)]
            ne, na = E.shape[0], k
            K = np.zeros((n + ne + na, n + ne + na))
            K[:n, :n] = Q
            K[:n, n:n + ne] = -E.T
            K[:n, n + ne:] = -GS.T
            K[n:n + ne, :n] = E
            K[n + ne:, :n] = GS
            rhs = np.concatenate([-g, -e, -hS])
            try:
                sol = np.linalg.solve(K, rhs)
            except np.linalg.LinAlgError:
                sol, *_ = np.linalg.lstsq(K, rhs, rcond=None)
            if np.max(np.abs(K @ sol - rhs)) > 1e-9 * max(
                1.0, float(np.max(np.abs(rhs)) if rhs.size else 0.0)
            ):
                continue
            z = sol[:n]
            mults = sol[n + ne:]
            if na and np.min(mults) < -_MULT_TOL:
                continue
            if ne and np.max(np.abs(E @ z + e)) > feas_tol:
                continue
            if mg and np.min(G @ z + h) < -feas_tol:
                continue
            obj = 0.5 * float(z @ Q @ z) + float(g @ z)
            if obj < best_obj - 1e-12:
                best_z, best_obj = z, obj
    return best_z, best_obj


def global_solve(problem, max_pairs=14):
    """Enumerate all complementarity branches and return the best solution.

    Each branch fixes one side of every pair to zero (as an equality) and
    keeps the other side nonnegative, exactly as in the original problem.
    Ties are broken toward the lexicographically smallest assignment (all
    branches tying the optimum are listed in the result).  Raises
    :class:`OracleTooLarge` when p exceeds ``max_pairs``.
    """
    p = problem.p
    if p > max_pairs:
        raise OracleTooLarge(f"p={p} exceeds max_pairs={max_pairs}")

    Q = problem.q_full().toarray()
    A = problem.A.toarray()
    L = problem.L.toarray()
    R = problem.R.toarray()

    best = OracleResult("infeasible", None, np.inf, None, [], {}, {})
    for index in range(2 ** p):
        assign = PieceAssignment.from_index(index, p)
        fix = np.asarray(assign.right_zero)  # True: t_i = 0, keep s_i >= 0
        E_rows, e_rows, G_rows, h_rows = [], [], [A], [problem.b]
        for i in range(p):
            if fix[i]:
                E_rows.append(R[i]); e_rows.append(problem.r[i])
                G_rows.append(L[i:i + 1]); h_rows.append(problem.l[i:i + 1])
            else:
                E_rows.append(L[i]); e_rows.append(problem.l[i])
                G_rows.append(R[i:i + 1]); h_rows.append(problem.r[i:i + 1])
        E = np.vstack(E_rows) if E_rows else None
        e = np.asarray(e_rows) if e_rows else None
        G = np.vstack(G_rows)
        h = np.concatenate(h_rows)

        z, obj = solve_qp_active_set(Q, problem.g, E, e, G, h)
        if z is None:
            continue
        best.piece_objectives[index] = obj
        best.piece_solutions[index] = z
        if obj < best.objective - 1e-9 * max(1.0, abs(obj)):
            best = OracleResult("optimal", z, obj, assign, [assign],
                                best.piece_objectives, best.piece_solutions)
        elif best.status == "optimal" and abs(obj - best.objective) <= 1e-9 * max(
            1.0, abs(best.objective)
        ):
            best.optimal_assignments.append(assign)
    return best
