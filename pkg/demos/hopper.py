"""Hopper over stairs: contact forces by complementarity.

Transcribes a planar two-mass hopper crossing a stepped platform.  Contact
is the pair (slip + gap) perp (normal force): the solver decides when to
make and break contact, and the friction cone bounds the tangential force.
Writes hopper.png with the trajectory and force profile when matplotlib is
available.

Run:  python3 demos/hopper.py
"""

import numpy as np

from lcqp import solve
from lcqp.benchmarks import HopperParams, build_hopper, hopper_heightmap

params = HopperParams()
problem, layout = build_hopper(params)
print(f"hopper LCQP: n={problem.n} variables, m={problem.m} inequality rows, "
      f"p={problem.p} complementarity pairs")

result = solve(problem, params.solver_settings())
print(f"status: {result.status.value}   objective: {result.objective:.4f}   "
      f"Newton iterations: {result.iterations}   wall: {result.wall_time:.2f}s")
print(f"violations: eq {result.violations.eq_viol:.1e}  "
      f"ineq {result.violations.ineq_viol:.1e}  comp {result.violations.comp_viol:.1e}")

get = lambda k: layout.extract(result.z, k)
foot_x, foot_z = get("foot_x"), get("foot_z")
head_x, head_z = get("head_x"), get("head_z")
fn, ff = get("normal_force"), get("friction_force")
gap = foot_z - hopper_heightmap(params, foot_x)

print("\nknot  foot_x  foot_z    gap     f_n     f_f")
for k in range(params.horizon - 1):
    flag = "contact" if fn[k] > 0.05 else ""
    print(f"{k:4d} {foot_x[k]:7.3f} {foot_z[k]:7.3f} {gap[k]:7.3f} "
          f"{fn[k]:7.3f} {ff[k]:7.3f}  {flag}")
print(f"max |f_f| - mu*f_n = {np.max(np.abs(ff) - params.mu * fn):.2e} (cone)")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 7), sharex=False)
    xs = np.linspace(-0.2, foot_x.max() + 0.4, 400)
    ax1.fill_between(xs, -0.05, hopper_heightmap(params, xs), color="0.8")
    ax1.plot(foot_x, foot_z, "o-", label="foot", ms=4)
    ax1.plot(head_x, head_z, "s-", label="head", ms=4)
    for k in range(params.horizon):
        ax1.plot([foot_x[k], head_x[k]], [foot_z[k], head_z[k]], "k-", lw=0.5)
    ax1.set_ylabel("z")
    ax1.legend()
    ax1.set_title("hopper trajectory over the stepped platform")
    t = np.arange(params.horizon - 1) * params.dt
    ax2.step(t, fn, where="post", label="normal force")
    ax2.step(t, ff, where="post", label="friction force")
    ax2.set_xlabel("time [s]")
    ax2.legend()
    fig.tight_layout()
    fig.savefig("hopper.png", dpi=130)
    print("\nwrote hopper.png")
except ImportError:
    pass
