"""Batch comparison of the solver against brute-force enumeration.

Draws random strictly-convex LCQPs, solves each with the continuation
solver, and checks the result against the 2^p-branch oracle: every
solution should be feasible and match some branch optimum, and most should
attain the global one.  Occasional non-global (but feasible, stationary)
answers are the expected price of a local method on a nonconvex problem.

Run:  python3 demos/solver_vs_oracle.py [count]
"""

import sys

import numpy as np

from lcqp import build_problem, global_solve, solve, violations

count = int(sys.argv[1]) if len(sys.argv) > 1 else 50
rng = np.random.default_rng(0)

solved = feasible = piece = globally = 0
for trial in range(count):
    n = int(rng.integers(2, 7))
    m = int(rng.integers(0, 4))
    p = int(rng.integers(1, min(4, n - 1) + 1))
    B = rng.standard_normal((n, n))
    Q = B @ B.T + np.eye(n)
    g = 2.0 * rng.standard_normal(n)
    zf = rng.standard_normal(n)
    A = rng.standard_normal((m, n)) if m else None
    b = -(A @ zf) + rng.uniform(0.2, 1.5, m) if m else None
    L = rng.standard_normal((p, n))
    R = rng.standard_normal((p, n))
    s_t = np.where(rng.random(p) < 0.5, rng.uniform(0.3, 2.0, p), 0.0)
    t_t = np.where(s_t > 0.0, 0.0, rng.uniform(0.3, 2.0, p))
    prob = build_problem(Q, g, A=A, b=b, L=L, l=s_t - L @ zf, R=R, r=t_t - R @ zf)

    res = solve(prob)
    orc = global_solve(prob)
    if not res.solved:
        print(f"  trial {trial}: {res.status.value} "
              f"(local failure; residual complementarity "
              f"{res.violations.comp_viol:.1e})")
        continue
    solved += 1
    if violations(prob, res.z).passes(1e-8, 1e-8, 1e-8):
        feasible += 1
    objs = orc.piece_objectives.values()
    if objs and min(abs(res.objective - o) for o in objs) <= 1e-6 * max(
        1.0, abs(res.objective)
    ):
        piece += 1
    if orc.status == "optimal" and abs(res.objective - orc.objective) <= 1e-6 * max(
        1.0, abs(orc.objective)
    ):
        globally += 1

print(f"\n{count} random LCQPs:")
print(f"  solved:             {solved}")
print(f"  feasible at 1e-8:   {feasible}")
print(f"  on a branch optimum:{piece:4d}")
print(f"  globally optimal:   {globally}")
