"""Quadrotor gate race with ordered progress constraints.

Each gate's progress control mu can only be nonzero at knots where the
position sits inside the gate box (a complementarity pair against an L1
epigraph of the gate-frame error), cumulative progress must reach one for
every gate, and the ordering rows force the gates in sequence.  The solved
controls come out binary: exactly one knot per gate.  Writes gates.png
when matplotlib is available.

Run:  python3 demos/gate_race.py
"""

import numpy as np

from lcqp import solve
from lcqp.benchmarks import GatesParams, build_quadrotor_gates

params = GatesParams()
problem, layout = build_quadrotor_gates(params)
print(f"gates LCQP: n={problem.n}, m={problem.m}, p={problem.p}")

result = solve(problem, params.solver_settings())
print(f"status: {result.status.value}   objective: {result.objective:.4f}   "
      f"iterations: {result.iterations}   wall: {result.wall_time:.2f}s")

x = layout.extract(result.z, "x")
y = layout.extract(result.z, "y")
gam = layout.extract(result.z, "progress")
mu = layout.extract(result.z, "progress_control")

for j in range(len(params.gates)):
    passing = np.where(mu[j] > 0.5)[0]
    knots = [int(k) + 1 for k in passing]
    print(f"gate {j + 1}: passed at knot(s) {knots}, final progress "
          f"{gam[j, -1]:.9f}")
print("progress controls round to:", np.round(mu, 3).tolist())

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(x, y, "o-", ms=4, label="quadrotor")
    for j, gate in enumerate(params.gates):
        R = gate.rotation()
        he = gate.half_extents
        corners = np.array([[-he[0], -he[1]], [he[0], -he[1]],
                            [he[0], he[1]], [-he[0], he[1]], [-he[0], -he[1]]])
        world = corners @ R + np.asarray(gate.center)
        ax.plot(world[:, 0], world[:, 1], "g-", lw=2)
        ax.annotate(f"gate {j + 1}", gate.center, textcoords="offset points",
                    xytext=(0, 14), ha="center")
    ax.plot(*params.target, "r*", ms=14, label="target")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend()
    ax.set_title("gate race with binary progress controls")
    fig.tight_layout()
    fig.savefig("gates.png", dpi=130)
    print("\nwrote gates.png")
except ImportError:
    pass
