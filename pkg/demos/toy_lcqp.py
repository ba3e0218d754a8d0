"""Solve tiny complementarity problems and cross-check the global oracle.

The first problem is perfectly symmetric: minimizing |z|^2/2 - 2(z1 + z2)
subject to 0 <= z1 perp z2 >= 0 has two global optima, (2, 0) and (0, 2),
separated by a saddle on the symmetry axis.  The solver lands on one of
them; the brute-force oracle enumerates both.

Run:  python3 demos/toy_lcqp.py
"""

import numpy as np

from lcqp import build_problem, global_solve, solve

problems = {
    "symmetric": build_problem(
        np.eye(2), np.array([-2.0, -2.0]),
        L=np.array([[1.0, 0.0]]), l=np.zeros(1),
        R=np.array([[0.0, 1.0]]), r=np.zeros(1),
    ),
    "biased": build_problem(
        np.eye(2), np.array([-2.0, -3.0]),
        L=np.array([[1.0, 0.0]]), l=np.zeros(1),
        R=np.array([[0.0, 1.0]]), r=np.zeros(1),
    ),
    "one-branch-infeasible": build_problem(
        np.eye(1), np.array([1.0]),
        L=np.array([[1.0]]), l=np.zeros(1),
        R=np.array([[1.0]]), r=np.ones(1),
    ),
}

for name, prob in problems.items():
    res = solve(prob)
    orc = global_solve(prob)
    gap = res.objective - orc.objective
    print(f"--- {name} ---")
    print(f"  solver: {res.status.value:10s} z = {np.round(res.z, 8)} "
          f"objective = {res.objective:.8f} ({res.iterations} Newton steps)")
    print(f"  oracle: optimum {orc.objective:.8f} over "
          f"{len(orc.piece_objectives)} feasible branches "
          f"({len(orc.optimal_assignments)} tie(s)); gap = {gap:.1e}")
    print(f"  violations: eq {res.violations.eq_viol:.1e}  "
          f"ineq {res.violations.ineq_viol:.1e}  comp {res.violations.comp_viol:.1e}")
