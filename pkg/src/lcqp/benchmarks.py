"""Robotics benchmark generators: hopper contact, rocket state-triggered
constraints, and quadrotor gate-progress problems.

Each generator transcribes a linear trajectory-optimization problem into
one LCQP plus a :class:`TrajectoryLayout` that maps named variable groups
back to indices of z, so solutions can be decoded and re-simulated.
Equalities (dynamics, variable splits) are encoded as paired inequalities;
the builder records those row pairs so checkers can report an equality
violation separately.

Costless split slacks get explicit upper bounds.  Under the log-barrier a
slack with no cost and no bound drifts until its barrier force kappa/slack
falls below the residual tolerance, i.e. to O(kappa/eps) magnitudes;
boxing them keeps every equilibrium at moderate size.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .problem import build_problem

__all__ = [
    "TrajectoryLayout",
    "HopperParams",
    "RocketParams",
    "GatesParams",
    "LcqpBuilder",
    "encode_sign",
    "build_hopper",
    "build_rocket_stc",
    "build_quadrotor_gates",
    "hopper_paper_scale",
    "rocket_paper_scale",
    "gates_paper_scale",
]


@dataclass
class TrajectoryLayout:
    """Named index groups into z, one row of indices per step.

    ``eq_pairs`` carries the paired-inequality rows that encode equalities,
    so checkers can report equality violations separately.
    """

    horizon: int
    dt: float
    slices: dict
    eq_pairs: list = None

    def extract(self, z, name):
        """Array of shape (steps, width) with the values of group ``name``."""
        idx = np.asarray(self.slices[name], dtype=int)
        return np.asarray(z)[idx]

    def covers(self, n):
        """True when the groups partition range(n) exactly."""
        seen = np.concatenate([np.ravel(v) for v in self.slices.values()])
        return len(seen) == n and len(np.unique(seen)) == n \
            and seen.min() == 0 and seen.max() == n - 1

    def to_json_dict(self):
        return {
            "schema": "lcqp-layout/1",
            "horizon": self.horizon,
            "dt": self.dt,
            "slices": {k: np.asarray(v).tolist() for k, v in self.slices.items()},
        }


class LcqpBuilder:
    """Incremental transcription into LCQP standard form.

    Linear expressions are (terms, const) with terms = [(index, coeff)].
    Cost helpers accumulate into 0.5 z'Qz + g'z; equalities become row
    pairs +-(expr) >= 0 whose indices are recorded in ``eq_pairs``.
    """

    def __init__(self):
        self.nvar = 0
        self._q = {}
        self._g = {}
        self._rows_a = []   # (terms, const)
        self._rows_l = []
        self._rows_r = []
        self.eq_pairs = []

    def var(self, count):
        idx = np.arange(self.nvar, self.nvar + count)
        self.nvar += count
        return idx

    # -- cost ---------------------------------------------------------------

    def add_quad(self, i, j, coeff):
        """Add coeff * z_i * z_j to the objective."""
        key = (min(i, j), max(i, j))
        self._q[key] = self._q.get(key, 0.0) + coeff

    def add_lin(self, i, coeff):
        self._g[i] = self._g.get(i, 0.0) + coeff

    def add_sq(self, i, weight, center=0.0):
        """Add weight * (z_i - center)^2."""
        self.add_quad(i, i, weight)
        if center != 0.0:
            self.add_lin(i, -2.0 * weight * center)

    def add_sq_diff(self, i, j, weight, offset=0.0):
        """Add weight * (z_i - z_j - offset)^2."""
        self.add_quad(i, i, weight)
        self.add_quad(j, j, weight)
        self.add_quad(i, j, -2.0 * weight)
        if offset != 0.0:
            self.add_lin(i, -2.0 * weight * offset)
            self.add_lin(j, 2.0 * weight * offset)

    # -- constraints ----------------------------------------------------------

    def ineq(self, terms, const=0.0):
        """terms . z + const >= 0"""
        self._rows_a.append((list(terms), float(const)))
        return len(self._rows_a) - 1

    def eq(self, terms, const=0.0):
        """terms . z + const = 0, as a recorded pair of inequalities."""
        terms = list(terms)
        i = self.ineq(terms, const)
        j = self.ineq([(k, -c) for k, c in terms], -const)
        self.eq_pairs.append((i, j))
        return i, j

    def box(self, i, lo, hi):
        """lo <= z_i <= hi as two inequality rows."""
        self.ineq([(i, 1.0)], -lo)
        self.ineq([(i, -1.0)], hi)

    def comp(self, left_terms, left_const, right_terms, right_const):
        """0 <= (left) perp (right) >= 0; returns the pair index."""
        self._rows_l.append((list(left_terms), float(left_const)))
        self._rows_r.append((list(right_terms), float(right_const)))
        return len(self._rows_l) - 1

    # -- assembly -------------------------------------------------------------

    def build(self, name=""):
        n = self.nvar
        qi, qj, qv = [], [], []
        for (i, j), v in self._q.items():
            # objective carries 1/2 z'Qz: diagonal entries double, off-diag
            # split symmetrically (upper stored once).
            if i == j:
                qi.append(i); qj.append(j); qv.append(2.0 * v)
            else:
                qi.append(i); qj.append(j); qv.append(v)
        Q = sp.coo_array((qv, (qi, qj)), shape=(n, n))
        g = np.zeros(n)
        for i, v in self._g.items():
            g[i] = v

        def stack(rows):
            ri, ci, vi, consts = [], [], [], []
            for rix, (terms, const) in enumerate(rows):
                consts.append(const)
                for i, c in terms:
                    ri.append(rix); ci.append(int(i)); vi.append(float(c))
            M = sp.coo_array((vi, (ri, ci)), shape=(len(rows), n))
            return M, np.asarray(consts)

        A, b = stack(self._rows_a)
        L, l = stack(self._rows_l)
        R, r = stack(self._rows_r)
        problem = build_problem(Q, g, A=A, b=b, L=L, l=l, R=R, r=r, name=name)
        return problem


def encode_sign(builder, x_terms, x_const, bound=100.0):
    """Add variables and constraints pinning s = sgn(x) for an affine x.

    Transcribes the KKT system of min_{-1<=s<=1} (-s*x): multipliers
    lam_p, lam_m >= 0, stationarity -x + lam_p - lam_m = 0, and the
    complementarity pairs (1 - s) perp lam_p and (1 + s) perp lam_m.
    For x != 0 any feasible point has s = sgn(x); at x = 0 any s in
    [-1, 1] is feasible with both multipliers zero.

    ``bound`` boxes the multipliers (so the log-barrier cannot inflate
    them) and must exceed the largest |x| the encoding will ever see,
    since lam_p - lam_m = x at feasibility.

    Returns (s_index, (lam_p_index, lam_m_index)).
    """
    s = builder.var(1)[0]
    lam_p = builder.var(1)[0]
    lam_m = builder.var(1)[0]
    neg_x = [(i, -c) for i, c in x_terms]
    builder.eq(neg_x + [(lam_p, 1.0), (lam_m, -1.0)], -x_const)
    builder.comp([(s, -1.0)], 1.0, [(lam_p, 1.0)], 0.0)
    builder.comp([(s, 1.0)], 1.0, [(lam_m, 1.0)], 0.0)
    # multipliers are pair right-hand sides (nonnegative on the relaxed
    # curve) but still get boxes so the barrier cannot inflate them.
    builder.box(lam_p, 0.0, bound)
    builder.box(lam_m, 0.0, bound)
    return s, (lam_p, lam_m)


# ---------------------------------------------------------------------------
# Hopper: planar two-mass hopper over stairs, contact complementarity.
# ---------------------------------------------------------------------------


@dataclass
class HopperParams:
    """Defaults are nondimensional (unit gravity, O(1) masses and forces)."""

    horizon: int = 20
    dt: float = 0.3
    mass_body: float = 1.0
    mass_foot: float = 0.2
    gravity: float = 1.0
    mu: float = 0.8                    # friction coefficient
    speed: float = 0.5                 # tracking speed in +x
    leg_length: float = 0.5            # nominal body-over-foot height
    # stair edges as (position, height-change); the height map is the sum
    # of sign functions h(x) = sum_j (dh_j/2) * (sgn(x - c_j) + 1).
    stairs: tuple = ((0.53, 0.15), (0.83, 0.15), (1.43, -0.15), (1.73, -0.15))
    w_track: float = 4.0
    w_control: float = 1e-2
    w_control_rate: float = 1e-2
    w_length: float = 2.0
    stand_steps: int = 5               # knots at the end with a frozen reference
    control_bound: float = 3.0         # actuator limit |u| <= bound
    sign_bound: float = 8.0            # box for the sign-encoding multipliers
    slip_bound: float = 10.0           # box for the tangential-velocity split

    def check(self):
        if self.horizon < 2:
            raise ValueError("horizon must be at least 2")
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")
        if not 0 <= self.stand_steps < self.horizon:
            raise ValueError("stand_steps must lie inside the horizon")
        if list(self.stairs) != sorted(self.stairs, key=lambda s: s[0]):
            raise ValueError("stairs must be sorted by position")
        return self

    def solver_settings(self):
        """Recommended solver settings for this problem family.

        The sign-encoding pairs sit at kappa/|x - edge| when the foot
        crosses a stair edge mid-flight; a deeper relaxation floor keeps
        them under the complementarity tolerance for margins down to
        ~1e-3 instead of the 0.1 the stock floor would require.
        """
        from .solver import SolverSettings

        return SolverSettings(kappa_min=1e-11)


def build_hopper(params=None):
    """Transcribe the hopper problem; returns (problem, layout)."""
    pr = (params or HopperParams()).check()
    N, dt = pr.horizon, pr.dt
    b = LcqpBuilder()

    # states per knot: head (x, z), foot (x, z) and their velocities
    xh = b.var(N); zh = b.var(N); xf = b.var(N); zf = b.var(N)
    vxh = b.var(N); vzh = b.var(N); vxf = b.var(N); vzf = b.var(N)
    # controls and contact forces per transition
    ux = b.var(N - 1); uz = b.var(N - 1)
    fn = b.var(N - 1); ff = b.var(N - 1)
    # tangential-velocity split (of the post-step foot velocity)
    vp = b.var(N - 1); vm = b.var(N - 1)

    edges = [c for c, _ in pr.stairs]
    amps = [dh / 2.0 for _, dh in pr.stairs]
    h_offset = sum(amps)  # makes h(-inf) = 0

    # sign variables per stair edge per knot
    sgn_vars = np.zeros((len(edges), N), dtype=int)
    for j, c in enumerate(edges):
        for k in range(N):
            s, _ = encode_sign(b, [(xf[k], 1.0)], -c, bound=pr.sign_bound)
            sgn_vars[j, k] = s

    def d_terms(k):
        """Signed distance d_k = zf_k - h(xf_k) as (terms, const)."""
        terms = [(zf[k], 1.0)]
        for j in range(len(edges)):
            terms.append((sgn_vars[j, k], -amps[j]))
        return terms, -h_offset

    # initial state: on the ground, moving at tracking speed
    init = {xh[0]: 0.0, zh[0]: pr.leg_length, xf[0]: 0.0, zf[0]: 0.0,
            vxh[0]: pr.speed, vzh[0]: 0.0, vxf[0]: pr.speed, vzf[0]: 0.0}
    for idx, val in init.items():
        b.eq([(idx, 1.0)], -val)

    # semi-implicit Euler dynamics
    mh, mf, grav = pr.mass_body, pr.mass_foot, pr.gravity
    for k in range(N - 1):
        b.eq([(vxh[k + 1], 1.0), (vxh[k], -1.0), (ux[k], -dt / mh)])
        b.eq([(vzh[k + 1], 1.0), (vzh[k], -1.0), (uz[k], -dt / mh)], dt * grav)
        b.eq([(vxf[k + 1], 1.0), (vxf[k], -1.0), (ux[k], dt / mf), (ff[k], -dt / mf)])
        b.eq([(vzf[k + 1], 1.0), (vzf[k], -1.0), (uz[k], dt / mf),
              (fn[k], -dt / mf)], dt * grav)
        b.eq([(xh[k + 1], 1.0), (xh[k], -1.0), (vxh[k + 1], -dt)])
        b.eq([(zh[k + 1], 1.0), (zh[k], -1.0), (vzh[k + 1], -dt)])
        b.eq([(xf[k + 1], 1.0), (xf[k], -1.0), (vxf[k + 1], -dt)])
        b.eq([(zf[k + 1], 1.0), (zf[k], -1.0), (vzf[k + 1], -dt)])

    # no penetration at every knot
    for k in range(N):
        terms, const = d_terms(k)
        b.ineq(terms, const)

    for k in range(N - 1):
        # split of the post-step tangential velocity: vxf_{k+1} = vp - vm
        b.eq([(vp[k], 1.0), (vm[k], -1.0), (vxf[k + 1], -1.0)])
        b.ineq([(vp[k], 1.0)])
        b.ineq([(vm[k], 1.0)])
        b.box(vp[k], 0.0, pr.slip_bound)
        b.box(vm[k], 0.0, pr.slip_bound)
        # actuator limits and friction cone
        b.box(ux[k], -pr.control_bound, pr.control_bound)
        b.box(uz[k], -pr.control_bound, pr.control_bound)
        b.ineq([(fn[k], pr.mu), (ff[k], -1.0)])
        b.ineq([(fn[k], pr.mu), (ff[k], 1.0)])
        # contact: (slip + gap) perp normal force, at post-step quantities
        terms, const = d_terms(k + 1)
        b.comp([(vp[k], 1.0), (vm[k], 1.0)] + terms, const, [(fn[k], 1.0)], 0.0)

    # costs; the reference stops a few knots before the end so the hopper
    # lands and stands (a trajectory that grazes the ground exactly at the
    # final knot leaves the last contact pair at a degenerate corner)
    for k in range(N):
        ref = pr.speed * dt * min(k, N - 1 - pr.stand_steps)
        b.add_sq(xh[k], pr.w_track, ref)
        b.add_sq(xf[k], pr.w_track, ref)
        b.add_sq_diff(zh[k], zf[k], pr.w_length, offset=pr.leg_length)
    for k in range(N - 1):
        b.add_sq(ux[k], pr.w_control)
        b.add_sq(uz[k], pr.w_control)
        if k:
            b.add_sq_diff(ux[k], ux[k - 1], pr.w_control_rate)
            b.add_sq_diff(uz[k], uz[k - 1], pr.w_control_rate)

    problem = b.build(name="hopper")
    lam_idx = np.setdiff1d(
        np.arange(problem.n),
        np.concatenate([xh, zh, xf, zf, vxh, vzh, vxf, vzf, ux, uz, fn, ff,
                        vp, vm, sgn_vars.ravel()]),
    )
    layout = TrajectoryLayout(
        horizon=N, dt=dt, eq_pairs=list(b.eq_pairs),
        slices={
            "head_x": xh, "head_z": zh, "foot_x": xf, "foot_z": zf,
            "head_vx": vxh, "head_vz": vzh, "foot_vx": vxf, "foot_vz": vzf,
            "control_x": ux, "control_z": uz,
            "normal_force": fn, "friction_force": ff,
            "slip_plus": vp, "slip_minus": vm,
            "stair_signs": sgn_vars,
            "sign_multipliers": lam_idx,
        },
    )
    return problem, layout


def hopper_heightmap(params, x):
    """Ground height at x for the preset's stair profile."""
    pr = params
    h = np.zeros_like(np.asarray(x, dtype=float))
    for c, dh in pr.stairs:
        h = h + (dh / 2.0) * (np.sign(np.asarray(x) - c) + 1.0)
    return h


# ---------------------------------------------------------------------------
# Rocket: planar catch with state-triggered constraints.
# ---------------------------------------------------------------------------


@dataclass
class RocketParams:
    horizon: int = 30
    dt: float = 0.25
    half_length: float = 0.8           # rocket half-length
    arm_length: float = 1.0            # catch arm reach in +x
    catch_height: float = 1.0
    trigger_height: float = 2.5        # STCs apply below this altitude
    gimbal_gain: float = 2.0           # attitude response to gimbal deflection
    # state (x, y, vx, vy, theta, omega): start behind the tower, above
    # the trigger altitude
    initial_state: tuple = (-3.0, 5.0, 1.2, -0.5, 0.0, 0.0)
    w_pos: float = 0.05
    w_att: float = 1.0
    w_control: float = 0.05
    split_bound: float = 20.0

    def check(self):
        if self.horizon < 2:
            raise ValueError("horizon must be at least 2")
        if self.half_length <= 0:
            raise ValueError("half_length must be positive")
        if not self.trigger_height > self.catch_height >= 0:
            raise ValueError("need trigger_height > catch_height >= 0")
        return self

    def solver_settings(self):
        from .solver import SolverSettings

        return SolverSettings()


def build_rocket_stc(params=None):
    """Transcribe the rocket catch problem; returns (problem, layout)."""
    pr = (params or RocketParams()).check()
    N, dt, ell = pr.horizon, pr.dt, pr.half_length
    b = LcqpBuilder()

    x = b.var(N); y = b.var(N); vx = b.var(N); vy = b.var(N)
    th = b.var(N); om = b.var(N)
    thrust = b.var(N - 1)   # thrust deviation from hover
    gim = b.var(N - 1)      # gimbal deflection

    # trigger split and constraint splits, at knots with controls
    gp = b.var(N - 1); gm = b.var(N - 1)
    hp = [b.var(N - 1) for _ in range(3)]
    hm = [b.var(N - 1) for _ in range(3)]

    for idx, val in zip((x[0], y[0], vx[0], vy[0], th[0], om[0]), pr.initial_state):
        b.eq([(idx, 1.0)], -val)

    # hover-linearized planar dynamics (unit thrust-to-weight, normalized g)
    for k in range(N - 1):
        b.eq([(vx[k + 1], 1.0), (vx[k], -1.0), (th[k], -dt), (gim[k], -dt)])
        b.eq([(vy[k + 1], 1.0), (vy[k], -1.0), (thrust[k], -dt)])
        b.eq([(om[k + 1], 1.0), (om[k], -1.0), (gim[k], dt * pr.gimbal_gain)])
        b.eq([(x[k + 1], 1.0), (x[k], -1.0), (vx[k + 1], -dt)])
        b.eq([(y[k + 1], 1.0), (y[k], -1.0), (vy[k + 1], -dt)])
        b.eq([(th[k + 1], 1.0), (th[k], -1.0), (om[k + 1], -dt)])

    # terminal catch: position at the arms, at rest and upright
    catch_x = 0.5 * pr.arm_length
    for idx, val in ((x[N - 1], catch_x), (y[N - 1], pr.catch_height),
                     (vx[N - 1], 0.0), (vy[N - 1], 0.0), (th[N - 1], 0.0)):
        b.eq([(idx, 1.0)], -val)

    # state-triggered constraints per transition knot:
    #   trigger g = h_trigger - y > 0 activates h1, h2 (both rocket ends in
    #   front of the tower plane x = 0) and h3 (plume pointed away).
    h_terms = [
        lambda k: ([(x[k], 1.0), (th[k], -ell)], 0.0),
        lambda k: ([(x[k], 1.0), (th[k], ell)], 0.0),
        lambda k: ([(th[k], 1.0), (gim[k], 1.0)], 0.0),
    ]
    for k in range(N - 1):
        b.eq([(gp[k], 1.0), (gm[k], -1.0), (y[k], 1.0)], -pr.trigger_height)
        b.ineq([(gm[k], 1.0)])
        b.box(gm[k], 0.0, pr.split_bound)
        for i in range(3):
            terms, const = h_terms[i](k)
            b.eq([(hp[i][k], 1.0), (hm[i][k], -1.0)]
                 + [(j, -c) for j, c in terms], -const)
            b.ineq([(hp[i][k], 1.0)])
            b.ineq([(hm[i][k], 1.0)])
            b.box(hm[i][k], 0.0, pr.split_bound)
        b.comp([(gp[k], 1.0)], 0.0,
               [(hm[0][k], 1.0), (hm[1][k], 1.0), (hm[2][k], 1.0)], 0.0)

    for k in range(N):
        b.add_sq(x[k], pr.w_pos, catch_x)
        b.add_sq(th[k], pr.w_att)
        b.add_sq(om[k], pr.w_att)
    for k in range(N - 1):
        b.add_sq(thrust[k], pr.w_control)
        b.add_sq(gim[k], pr.w_control)

    problem = b.build(name="rocket_stc")
    layout = TrajectoryLayout(
        horizon=N, dt=dt, eq_pairs=list(b.eq_pairs),
        slices={
            "x": x, "y": y, "vx": vx, "vy": vy, "theta": th, "omega": om,
            "thrust": thrust, "gimbal": gim,
            "trigger_plus": gp, "trigger_minus": gm,
            "h_plus": np.asarray([hp[i] for i in range(3)]),
            "h_minus": np.asarray([hm[i] for i in range(3)]),
        },
    )
    return problem, layout


# ---------------------------------------------------------------------------
# Quadrotor gates: progress constraints with ordered completion.
# ---------------------------------------------------------------------------


@dataclass
class Gate:
    center: tuple
    angle: float               # gate frame rotation (radians)
    half_extents: tuple        # (normal, lateral); thin along the normal

    def rotation(self):
        c, s = np.cos(self.angle), np.sin(self.angle)
        return np.array([[c, s], [-s, c]])


@dataclass
class GatesParams:
    horizon: int = 24
    dt: float = 0.25
    gates: tuple = (
        Gate(center=(1.5, 0.5), angle=0.0, half_extents=(0.05, 0.5)),
        Gate(center=(3.0, -0.4), angle=0.0, half_extents=(0.05, 0.5)),
        Gate(center=(4.5, 0.3), angle=0.0, half_extents=(0.05, 0.5)),
    )
    initial_state: tuple = (0.0, 0.0, 1.0, 0.0)   # (x, y, vx, vy)
    target: tuple = (6.0, 0.0)
    w_target: float = 4.0
    w_vel: float = 0.05
    w_control: float = 0.05
    slack_bound: float = 10.0

    def check(self):
        if self.horizon < 2:
            raise ValueError("horizon must be at least 2")
        if not self.gates:
            raise ValueError("at least one gate required")
        for gate in self.gates:
            if min(gate.half_extents) <= 0:
                raise ValueError("gate half-extents must be positive")
        return self

    def solver_settings(self):
        from .solver import SolverSettings

        return SolverSettings()


def build_quadrotor_gates(params=None):
    """Transcribe the gate-progress problem; returns (problem, layout)."""
    pr = (params or GatesParams()).check()
    N, dt, m = pr.horizon, pr.dt, len(pr.gates)
    b = LcqpBuilder()

    x = b.var(N); y = b.var(N); vx = b.var(N); vy = b.var(N)
    ax = b.var(N - 1); ay = b.var(N - 1)
    # progress state/control per gate per knot k = 1..N-1 (gamma_k, mu_k)
    gam = np.stack([b.var(N - 1) for _ in range(m)])
    mu = np.stack([b.var(N - 1) for _ in range(m)])
    # gate-frame slack and L1 epigraph variables per gate per knot
    s_sl = np.stack([[b.var(2) for _ in range(N - 1)] for _ in range(m)])
    a_ep = np.stack([[b.var(2) for _ in range(N - 1)] for _ in range(m)])

    for idx, val in zip((x[0], y[0], vx[0], vy[0]), pr.initial_state):
        b.eq([(idx, 1.0)], -val)

    for k in range(N - 1):
        b.eq([(vx[k + 1], 1.0), (vx[k], -1.0), (ax[k], -dt)])
        b.eq([(vy[k + 1], 1.0), (vy[k], -1.0), (ay[k], -dt)])
        b.eq([(x[k + 1], 1.0), (x[k], -1.0), (vx[k + 1], -dt)])
        b.eq([(y[k + 1], 1.0), (y[k], -1.0), (vy[k + 1], -dt)])

    for j, gate in enumerate(pr.gates):
        Rw = gate.rotation()
        ox, oy = gate.center
        for kk in range(N - 1):
            k = kk + 1  # progress indexed at knots 1..N-1
            # gamma recursion
            if kk == 0:
                b.eq([(gam[j, kk], 1.0), (mu[j, kk], -1.0)])
            else:
                b.eq([(gam[j, kk], 1.0), (gam[j, kk - 1], -1.0), (mu[j, kk], -1.0)])
            # gate-frame error e = Rw (r_k - o) + s, per axis, with the
            # epigraph a >= |e| elementwise
            for ax_i in range(2):
                row = Rw[ax_i]
                const = -(row[0] * ox + row[1] * oy)
                e_terms = [(x[k], row[0]), (y[k], row[1]), (s_sl[j, kk, ax_i], 1.0)]
                b.ineq([(a_ep[j, kk, ax_i], 1.0)] + [(i, -c) for i, c in e_terms],
                       -const)
                b.ineq([(a_ep[j, kk, ax_i], 1.0)] + e_terms, const)
                b.box(a_ep[j, kk, ax_i], 0.0, pr.slack_bound)
                b.box(s_sl[j, kk, ax_i], -gate.half_extents[ax_i],
                      gate.half_extents[ax_i])
            # progress control only active inside the gate box
            b.comp([(mu[j, kk], 1.0)], 0.0,
                   [(a_ep[j, kk, 0], 1.0), (a_ep[j, kk, 1], 1.0)], 0.0)
        # all gates complete by the end
        b.eq([(gam[j, N - 2], 1.0)], -1.0)
    # ordered completion
    for j in range(m - 1):
        for kk in range(N - 1):
            b.ineq([(gam[j, kk], 1.0), (gam[j + 1, kk], -1.0)])

    # terminal target; running cost only damps velocity and effort
    b.add_sq(x[N - 1], pr.w_target, pr.target[0])
    b.add_sq(y[N - 1], pr.w_target, pr.target[1])
    b.add_sq(vx[N - 1], pr.w_target)
    b.add_sq(vy[N - 1], pr.w_target)
    for k in range(N):
        b.add_sq(vx[k], pr.w_vel)
        b.add_sq(vy[k], pr.w_vel)
    for k in range(N - 1):
        b.add_sq(ax[k], pr.w_control)
        b.add_sq(ay[k], pr.w_control)

    problem = b.build(name="quadrotor_gates")
    layout = TrajectoryLayout(
        horizon=N, dt=dt, eq_pairs=list(b.eq_pairs),
        slices={
            "x": x, "y": y, "vx": vx, "vy": vy,
            "control_x": ax, "control_y": ay,
            "progress": gam, "progress_control": mu,
            "gate_slack": s_sl.reshape(m, -1),
            "gate_epigraph": a_ep.reshape(m, -1),
        },
    )
    return problem, layout


# ---------------------------------------------------------------------------
# Paper-scale presets: dimension-matching stretch configurations.
# ---------------------------------------------------------------------------


def hopper_paper_scale():
    return HopperParams(horizon=60,
                        stairs=((1.51, 0.15), (2.23, 0.15), (4.78, -0.15),
                                (5.51, -0.15)))


def rocket_paper_scale():
    return RocketParams(horizon=42)


def gates_paper_scale():
    return GatesParams(
        horizon=57,
        gates=(
            Gate(center=(1.5, 0.5), angle=0.0, half_extents=(0.05, 0.5)),
            Gate(center=(3.0, -0.4), angle=0.0, half_extents=(0.05, 0.5)),
            Gate(center=(4.5, 0.3), angle=0.0, half_extents=(0.05, 0.5)),
            Gate(center=(6.0, -0.2), angle=0.0, half_extents=(0.05, 0.5)),
        ),
        target=(7.5, 0.0),
    )
