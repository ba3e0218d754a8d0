"""Rocket catch with state-triggered constraints.

Below the trigger altitude, both ends of the rocket must stay in front of
the catch tower and the engine plume must point away from it.  Each
implication g > 0 => h >= 0 is transcribed with slack splits plus a single
complementarity pair between the trigger surplus and the summed constraint
deficits.  Writes rocket.png when matplotlib is available.

Run:  python3 demos/rocket_catch.py
"""

import numpy as np

from lcqp import solve
from lcqp.benchmarks import RocketParams, build_rocket_stc

params = RocketParams()
problem, layout = build_rocket_stc(params)
print(f"rocket LCQP: n={problem.n}, m={problem.m}, p={problem.p}")

result = solve(problem, params.solver_settings())
print(f"status: {result.status.value}   objective: {result.objective:.4f}   "
      f"iterations: {result.iterations}   wall: {result.wall_time:.2f}s")

x = layout.extract(result.z, "x")
y = layout.extract(result.z, "y")
th = layout.extract(result.z, "theta")
gim = layout.extract(result.z, "gimbal")

print("\nknot      x       y   triggered   h1      h2      h3")
for k in range(params.horizon - 1):
    trig = params.trigger_height - y[k] > 1e-6
    h1 = x[k] - params.half_length * th[k]
    h2 = x[k] + params.half_length * th[k]
    h3 = th[k] + gim[k]
    print(f"{k:4d} {x[k]:8.3f} {y[k]:8.3f}   {str(trig):5s}   "
          f"{h1:7.3f} {h2:7.3f} {h3:7.3f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 6))
    ax.axhline(params.trigger_height, color="tab:orange", ls="--",
               label="trigger altitude")
    ax.plot([0.0, 0.0], [0.0, params.catch_height], color="0.3", lw=6,
            label="tower")
    ax.plot([0.0, params.arm_length], [params.catch_height] * 2, color="0.3", lw=4)
    ax.plot(x, y, "o-", ms=4, label="rocket")
    ell = params.half_length
    for k in range(0, params.horizon, 2):
        ax.plot([x[k] + ell * th[k], x[k] - ell * th[k]],
                [y[k] - ell, y[k] + ell], "r-", lw=1)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend()
    ax.set_title("rocket catch with the keep-in-front trigger region")
    fig.tight_layout()
    fig.savefig("rocket.png", dpi=130)
    print("\nwrote rocket.png")
except ImportError:
    pass
