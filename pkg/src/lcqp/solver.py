"""Augmented-Lagrangian Newton solver with relaxation continuation.

One solve runs a single loop of Newton iterations on the KKT residual of
the relaxed subproblem.  Whenever the residual drops below ``eps_res`` the
outer parameters advance: the penalty rho grows geometrically to its cap
first, then the relaxation kappa shrinks geometrically toward its floor
with a multiplier update at each shrink.  The solve ends when the original
problem's constraint violations pass their tolerances (Solved) or on a
terminal failure.

Each Newton system is factored by the regularized LDL' routine; if the
inertia is not (n+m+p positive, m+2p negative) the primal diagonal shift
delta escalates as max(100, 10*delta) and the factorization is retried.
Steps are accepted by a filter on (feasibility, stationarity) residual
norms; a failed line search escalates delta the same way.
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import WrongInertia, ZeroPivotError
from .kkt import IterateState, KktWorkspace
from .problem import objective as _objective
from .problem import violations as _violations
from .retraction import softplus
from .sparse import expected_inertia, ldl_factor, ruiz_equilibrate

__all__ = [
    "SolverSettings",
    "SolveStatus",
    "SolveResult",
    "StageRecord",
    "FilterEntry",
    "Filter",
    "initialize",
    "newton_direction",
    "filter_line_search",
    "outer_update",
    "solve",
]

log = logging.getLogger("lcqp")


@dataclass
class SolverSettings:
    """Solver parameters; the first ten rows match the published defaults."""

    rho0: float = 10.0            # initial penalty
    gamma_rho: float = 10.0       # penalty growth factor
    rho_max: float = 1e7          # penalty cap
    kappa0: float = 0.1           # initial relaxation
    gamma_kappa: float = 0.5      # relaxation shrink factor
    kappa_min: float = 1e-9       # relaxation floor
    eps_res: float = 1e-6         # inner KKT residual tolerance
    eps_eq: float = 1e-8          # equality (slack-definition) tolerance
    eps_ineq: float = 1e-8        # inequality tolerance
    eps_comp: float = 1e-8        # complementarity tolerance
    max_iters: int = 2000         # total Newton iterations
    max_stage_iters: int = 400    # Newton iterations between outer updates
    ls_backtrack: float = 0.5
    ls_min_step: float = 1e-8
    filter_margin: float = 1e-5
    delta0: float = 1e2           # regularization floor after line-search failure
    delta0_inertia: float = 1e-6  # regularization floor after an inertia defect
    delta_growth: float = 10.0
    delta_max: float = 1e12
    ruiz_iters: int = 20
    ruiz_tol: float = 0.1
    static_reg: float = 1e-8      # +/- shift keeping factorizations quasi-definite
    refine_steps: int = 2         # iterative refinement passes per solve

    def check(self):
        pos = [
            "rho0", "gamma_rho", "rho_max", "kappa0", "gamma_kappa", "kappa_min",
            "eps_res", "eps_eq", "eps_ineq", "eps_comp", "ls_backtrack",
            "ls_min_step", "filter_margin", "delta0", "delta_growth", "delta_max",
        ]
        for name in pos:
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if not (0.0 < self.gamma_kappa < 1.0):
            raise ValueError("gamma_kappa must lie in (0, 1)")
        if self.gamma_rho <= 1.0:
            raise ValueError("gamma_rho must exceed 1")
        if self.kappa_min >= self.kappa0:
            raise ValueError("kappa_min must be below kappa0")
        if self.rho0 > self.rho_max:
            raise ValueError("rho0 must not exceed rho_max")
        if self.max_iters < 1 or self.max_stage_iters < 1:
            raise ValueError("iteration limits must be at least 1")
        return self


class SolveStatus(Enum):
    SOLVED = "solved"
    MAX_ITERATIONS = "max_iterations"
    LINE_SEARCH_FAILURE = "line_search_failure"
    RELAXATION_FLOOR = "relaxation_floor"
    NUMERICAL_ERROR = "numerical_error"


@dataclass
class StageRecord:
    """One outer stage: constant (rho, kappa) until the residual converged."""

    rho: float
    kappa: float
    res_norm: float
    newton_steps: int
    delta_max: float


@dataclass
class SolveResult:
    status: SolveStatus
    z: np.ndarray
    s: np.ndarray
    t: np.ndarray
    w: np.ndarray
    lam_w: np.ndarray
    lam_sig: np.ndarray
    objective: float
    violations: object
    iterations: int
    trace: list
    settings: SolverSettings
    wall_time: float

    @property
    def solved(self):
        return self.status is SolveStatus.SOLVED


@dataclass
class FilterEntry:
    theta: float  # feasibility measure (residual blocks 4-5)
    phi: float    # stationarity measure (residual blocks 1-3)


class Filter:
    """Step acceptance by non-domination in the (theta, phi) plane."""

    def __init__(self, margin):
        self.margin = margin
        self.entries = []

    def clear(self):
        self.entries.clear()

    def acceptable(self, theta, phi, theta_cur, phi_cur):
        g = self.margin
        # Sufficient relative improvement versus the current point; a
        # measure that is already zero cannot count as "improving".
        theta_ok = theta_cur > 0.0 and theta <= theta_cur * (1.0 - g)
        phi_ok = phi_cur > 0.0 and phi <= phi_cur * (1.0 - g)
        if not (theta_ok or phi_ok):
            return False
        # ... and not dominated (within margin) by any filter entry.
        for e in self.entries:
            if theta >= e.theta * (1.0 - g) and phi >= e.phi * (1.0 - g):
                return False
        return True

    def add(self, theta, phi):
        self.entries = [
            e for e in self.entries if not (e.theta >= theta and e.phi >= phi)
        ]
        self.entries.append(FilterEntry(theta, phi))


def initialize(problem, settings, z0=None):
    """Initial iterate: z0 (default 0), sigma = v = 0 so every slack sits at
    the manifold identity sqrt(kappa0); lam_w = -p(0) = -sqrt(kappa0)."""
    n, m, p = problem.n, problem.m, problem.p
    if z0 is None:
        z = np.zeros(n)
    else:
        z = np.asarray(z0, dtype=float).ravel()
        if z.shape != (n,):
            raise ValueError(f"z0 has length {z.shape[0]}, expected {n}")
    rk = np.sqrt(settings.kappa0)
    return IterateState(
        z=z,
        v=np.zeros(m),
        sigma=np.zeros(p),
        lam_w=np.full(m, -rk),
        lam_sig=np.zeros(2 * p),
        alpha=np.zeros(m),
        beta=np.zeros(2 * p),
        rho=settings.rho0,
        kappa=settings.kappa0,
    )


def newton_direction(problem, state, delta=0.0, workspace=None, scale=None,
                     refine_steps=1):
    """Solve the regularized Newton system M ds = -r_scaled.

    Raises :class:`WrongInertia` when the factor's inertia differs from
    (n+m+p, m+2p, 0) and :class:`ZeroPivotError` on breakdown; the caller
    escalates ``delta`` in both cases.
    """
    ws = workspace or KktWorkspace(problem)
    M = ws.assemble(state)
    if scale is None:
        scale = np.ones(ws.dim)
    Ms = M.scaled(scale)
    reg = delta * ws.reg_pattern
    factors = ldl_factor(Ms, reg=reg, symbolic=ws.ldl_symbolic)
    want = expected_inertia(ws.n, ws.m, ws.p)
    if factors.inertia != want:
        raise WrongInertia(factors.inertia, want)
    r = ws.residual(state)
    rhs = -scale * ws.scale_residual(r, state)
    x = factors.solve(rhs)
    for _ in range(refine_steps):
        resid = rhs - Ms.matvec(x) - reg * x
        x = x + factors.solve(resid)
    return scale * x


def filter_line_search(ws, state, step, filt, settings, r_cur):
    """Backtrack tau in {1, 1/2, ...} until the filter accepts the candidate.

    On acceptance the *current* (theta, phi) joins the filter and the new
    iterate plus its residual are returned; ``None`` signals failure (the
    caller raises delta and retries with a new direction).
    """
    theta0, phi0 = ws.theta_phi(r_cur)
    layout = (ws.n, ws.m, ws.p)
    tau = 1.0
    while tau >= settings.ls_min_step:
        cand = state.stepped(step, tau, layout)
        if cand.is_finite():
            r_c = ws.residual(cand)
            if np.all(np.isfinite(r_c)):
                theta_c, phi_c = ws.theta_phi(r_c)
                if filt.acceptable(theta_c, phi_c, theta0, phi0):
                    filt.add(theta0, phi0)
                    return cand, r_c, tau
        tau *= settings.ls_backtrack
    return None


def _merit_line_search(problem, ws, state, step, settings):
    """Fallback Armijo backtracking on the augmented-Lagrangian merit.

    The filter measures residual norms, which can reject genuine descent
    of the inner objective in tightly curved valleys; when the filter
    gives up, a plain decrease of the merit is accepted instead.  Dual
    variables ride along with the same step length.
    """
    layout = (ws.n, ws.m, ws.p)
    merit0 = _al_merit(problem, ws, state)
    if not np.isfinite(merit0):
        return None
    tau = 1.0
    while tau >= settings.ls_min_step:
        cand = state.stepped(step, tau, layout)
        if cand.is_finite():
            merit = _al_merit(problem, ws, cand)
            if np.isfinite(merit) and merit < merit0 - 1e-12 * max(1.0, abs(merit0)):
                r_c = ws.residual(cand)
                if np.all(np.isfinite(r_c)):
                    return cand, r_c, tau
        tau *= settings.ls_backtrack
    return None


def outer_update(state, settings, vio):
    """Advance (rho, kappa, multipliers) after inner convergence.

    Returns the action taken: "solved" when the violations pass, "rho"
    while the penalty still grows, "kappa" for a relaxation shrink plus
    multiplier update (kappa saturates at its floor but multiplier updates
    continue there).

    Besides the three violation metrics, Solved requires kappa itself to
    be at most max(kappa_min, eps_comp).  At an inner-converged iterate
    the log-domain rows enforce w_i * lam_w_i = -kappa by construction,
    so this bound certifies inequality complementary slackness; without
    it a barrier-displaced interior point of a plain QP (feasible, zero
    violations) would be accepted at large kappa.
    """
    if vio.passes(settings.eps_eq, settings.eps_ineq, settings.eps_comp) \
            and state.kappa <= max(settings.kappa_min, settings.eps_comp):
        return "solved"
    if state.rho < settings.rho_max:
        state.rho = min(settings.gamma_rho * state.rho, settings.rho_max)
        return "rho"
    state.kappa = max(settings.gamma_kappa * state.kappa, settings.kappa_min)
    state.alpha = state.lam_w.copy()
    state.beta = state.lam_sig.copy()
    return "kappa"


def _result(problem, state, status, iterations, trace, settings, t0):
    p, m = problem.p, problem.m
    if p:
        s = softplus(state.sigma, state.kappa)
        t = softplus(-state.sigma, state.kappa)
    else:
        s = np.empty(0)
        t = np.empty(0)
    w = softplus(state.v, state.kappa) if m else np.empty(0)
    vio = _violations(problem, state.z, s=s, t=t, w=w)
    try:
        obj = _objective(problem, state.z)
    except Exception:
        obj = float("nan")
    return SolveResult(
        status=status, z=state.z, s=s, t=t, w=w,
        lam_w=state.lam_w, lam_sig=state.lam_sig,
        objective=obj, violations=vio, iterations=iterations,
        trace=trace, settings=settings, wall_time=time.perf_counter() - t0,
    )


def _stage_violations(problem, state):
    """Violations at the iterate, with slacks reconstructed from (v, sigma)."""
    p, m = problem.p, problem.m
    s = softplus(state.sigma, state.kappa) if p else None
    t = softplus(-state.sigma, state.kappa) if p else None
    w = softplus(state.v, state.kappa) if m else None
    return _violations(problem, state.z, s=s, t=t, w=w)


def solve(problem, settings=None, z0=None, callback=None):
    """Run the full continuation solve on a validated problem.

    ``callback(k, state)`` is invoked at the initial point and after every
    accepted Newton step; it is the hook used to instrument on-manifold
    invariants.  Identical inputs produce identical results: the algorithm
    is strictly serial with no randomized components.
    """
    settings = (settings or SolverSettings()).check()
    t0 = time.perf_counter()
    ws = KktWorkspace(problem)
    state = initialize(problem, settings, z0)
    filt = Filter(settings.filter_margin)
    trace = []
    total_newton = 0
    stage_newton = 0
    stage_delta = 0.0
    stage_escapes = 0
    stall_count = 0
    merit_mode = False
    delta_warm = 0.0
    ruiz_scale = None
    floor_best = np.inf

    if callback is not None:
        callback(0, state)

    while True:
        r = ws.residual(state)
        blown = max(
            float(np.max(np.abs(state.z))) if state.z.size else 0.0,
            float(np.max(np.abs(state.lam_sig))) if state.lam_sig.size else 0.0,
            float(np.max(np.abs(state.lam_w))) if state.lam_w.size else 0.0,
        ) > 1e13
        if blown or not np.all(np.isfinite(r)):
            log.info("diverging or non-finite iterate; aborting")
            return _result(problem, state, SolveStatus.NUMERICAL_ERROR,
                           total_newton, trace, settings, t0)
        rnorm = float(np.max(np.abs(r))) if r.size else 0.0

        # A stage must run at least one Newton step before its outer update,
        # otherwise the iterate goes stale once kappa changes stop moving the
        # residual by more than eps_res.  (Skipped only at the floating-point
        # floor, where a step would be degenerate.)
        if rnorm <= settings.eps_res and (stage_newton >= 1 or rnorm <= 1e-13):
            # Inner convergence at a point with negative curvature means a
            # saddle of the relaxed subproblem (typical on symmetry axes
            # of exactly symmetric problems): kick off it and keep going
            # instead of refining a non-minimizing stationary point.
            if stage_escapes < 3:
                esc = _saddle_escape(problem, ws, state, ruiz_scale, settings)
                if esc is not None:
                    stage_escapes += 1
                    state = esc
                    filt.clear()
                    log.debug("saddle escape at stage convergence (%d)", stage_escapes)
                    continue
            vio = _stage_violations(problem, state)
            trace.append(StageRecord(state.rho, state.kappa, rnorm,
                                     stage_newton, stage_delta))
            action = outer_update(state, settings, vio)
            log.debug(
                "stage done: rho=%.1e kappa=%.1e steps=%d viol=(%.1e,%.1e,%.1e) -> %s",
                trace[-1].rho, trace[-1].kappa, stage_newton,
                vio.eq_viol, vio.ineq_viol, vio.comp_viol, action,
            )
            if action == "solved":
                return _result(problem, state, SolveStatus.SOLVED,
                               total_newton, trace, settings, t0)
            if action == "kappa" and state.kappa == settings.kappa_min \
                    and trace[-1].kappa == settings.kappa_min:
                # At the relaxation floor only multiplier updates remain;
                # stop once they no longer shrink the violations.
                worst = vio.worst()
                if worst > 0.99 * floor_best:
                    return _result(problem, state, SolveStatus.RELAXATION_FLOOR,
                                   total_newton, trace, settings, t0)
                floor_best = min(floor_best, worst)
            filt.clear()
            stage_newton = 0
            stage_delta = 0.0
            stage_escapes = 0
            stall_count = 0
            merit_mode = False
            delta_warm = 0.0
            ruiz_scale = None
            continue

        if total_newton >= settings.max_iters or stage_newton >= settings.max_stage_iters:
            trace.append(StageRecord(state.rho, state.kappa, rnorm,
                                     stage_newton, stage_delta))
            return _result(problem, state, SolveStatus.MAX_ITERATIONS,
                           total_newton, trace, settings, t0)

        M = ws.assemble(state)
        if ruiz_scale is None:
            ruiz_scale, _ = ruiz_equilibrate(M, settings.ruiz_iters, settings.ruiz_tol)
        Ms = M.scaled(ruiz_scale)
        rs = -ruiz_scale * ws.scale_residual(r, state)
        want = expected_inertia(ws.n, ws.m, ws.p)

        delta = 0.0
        accepted = None
        indefinite = None  # delta=0 factors with wrong inertia, kept for escape
        while True:
            try:
                reg = settings.static_reg * ws.sign_pattern + delta * ws.reg_pattern
                factors = ldl_factor(Ms, reg=reg, symbolic=ws.ldl_symbolic)
                if factors.inertia != want:
                    if delta == 0.0:
                        indefinite = factors
                    raise WrongInertia(factors.inertia, want)
                x = factors.solve(rs)
                for _ in range(settings.refine_steps):
                    resid = rs - Ms.matvec(x) - reg * x
                    x = x + factors.solve(resid)
                step = ruiz_scale * x
                if not np.all(np.isfinite(step)):
                    raise ZeroPivotError(-1)
                # Watchdog: if the filter has burned through most of the
                # stage budget without inner convergence, finish the stage
                # by monotone merit descent instead (the filter can cycle
                # between residual- and merit-improving steps).
                if not merit_mode and stage_newton >= 60:
                    merit_mode = True
                    log.debug("stage watchdog: switching to merit-only steps")
                if merit_mode:
                    accepted = _merit_line_search(problem, ws, state, step, settings)
                else:
                    accepted = filter_line_search(ws, state, step, filt, settings, r)
                    if accepted is None:
                        accepted = _merit_line_search(problem, ws, state, step, settings)
                if accepted is None:
                    raise _LineSearchFailed()
                break
            except (WrongInertia, ZeroPivotError, _LineSearchFailed) as exc:
                # Inertia defects need only enough shift to flip the stray
                # eigenvalues of the equilibrated matrix (O(1) entries), so
                # their ladder starts tiny and can warm-start from the last
                # shift this stage needed; a failed line search jumps to
                # the coarse floor to force a strongly damped step.
                if isinstance(exc, _LineSearchFailed):
                    floor = settings.delta0
                else:
                    floor = max(settings.delta0_inertia, 0.3 * delta_warm)
                delta = max(floor, settings.delta_growth * delta)
                log.debug("retry with delta=%.1e after %s", delta, type(exc).__name__)
                if delta > settings.delta_max:
                    esc = _escape_direction(problem, ws, state, indefinite, ruiz_scale)
                    if esc is not None and stage_escapes < 2:
                        # Trapped near a stationary point with negative
                        # curvature (a saddle of the relaxed subproblem, e.g.
                        # on a symmetry axis).  Kick along the curvature
                        # direction: second-order descent for the merit even
                        # though the residual norm rises.
                        stage_escapes += 1
                        state = esc
                        filt.clear()
                        log.debug("negative-curvature escape (%d this stage)",
                                  stage_escapes)
                        break
                    trace.append(StageRecord(state.rho, state.kappa, rnorm,
                                             stage_newton, stage_delta))
                    return _result(problem, state, SolveStatus.LINE_SEARCH_FAILURE,
                                   total_newton, trace, settings, t0)
        if accepted is None:
            continue  # escape kick taken; restart the iteration

        state, _, tau = accepted
        total_newton += 1
        stage_newton += 1
        stage_delta = max(stage_delta, delta)
        delta_warm = delta if delta > 0.0 else 0.3 * delta_warm
        if callback is not None:
            callback(total_newton, state)

        # Stall watch: a run of micro-steps means the filter is accepting
        # cosmetic progress in a curved valley.  Kick along the negative
        # curvature direction (when one exists) rather than crawling.
        stall_count = stall_count + 1 if tau <= 1e-3 else 0
        if stall_count >= 8 and stage_escapes < 3:
            esc = _escape_direction(problem, ws, state, indefinite, ruiz_scale)
            if esc is None:
                esc = _saddle_escape(problem, ws, state, ruiz_scale, settings)
            if esc is not None:
                stage_escapes += 1
                stall_count = 0
                state = esc
                filt.clear()
                log.debug("stall escape (%d this stage)", stage_escapes)


def _al_merit(problem, ws, state):
    """Augmented-Lagrangian value at the iterate (the inner-loop merit)."""
    z = state.z
    val = 0.5 * float(z @ (problem.q_full() @ z)) + float(problem.g @ z)
    if ws.m:
        w = softplus(state.v, state.kappa)
        res_w = problem.A @ z + problem.b - w
        val += (
            -state.kappa * float(np.sum(np.log(w)))
            + float(state.alpha @ res_w)
            + 0.5 * state.rho * float(res_w @ res_w)
        )
    if ws.p:
        h = np.concatenate([
            softplus(state.sigma, state.kappa),
            softplus(-state.sigma, state.kappa),
        ])
        res_h = ws.stacked.J @ z + ws.stacked.c - h
        val += float(state.beta @ res_h) + 0.5 * state.rho * float(res_h @ res_h)
    return val


def _escape_direction(problem, ws, state, factors, ruiz_scale, threshold=-1e-6):
    """State kicked along a negative-curvature direction, or None.

    ``factors`` are the unregularized LDL factors with wrong inertia; a
    meaningfully negative pivot on a primal row yields a direction d with
    d'Md < 0 (marginal pivots are treated as degeneracy, not curvature).
    The kick length is probed geometrically in both signs and the
    candidate with the lowest augmented-Lagrangian merit wins: the merit
    falls through the saddle into the neighboring basin, so the probe
    jumps across the ridge instead of stopping on its slope.
    """
    if factors is None:
        return None
    primal = ws.reg_pattern[factors.perm] > 0.0
    cand = np.where(primal & (factors.D < threshold))[0]
    if cand.size == 0:
        return None
    k = cand[np.argmin(factors.D[cand])]
    d = ruiz_scale * factors.curvature_direction(int(k))
    dn = float(np.max(np.abs(d)))
    if not np.isfinite(dn) or dn == 0.0:
        return None
    d = d / dn
    layout = (ws.n, ws.m, ws.p)
    base = 0.1 * max(1.0, float(np.max(np.abs(state.z))) if state.z.size else 1.0)
    best, best_merit = None, _al_merit(problem, ws, state)
    for sign in (1.0, -1.0):
        for k2 in range(16):
            cand_state = state.stepped(d, sign * base * 2.0 ** k2, layout)
            if not cand_state.is_finite():
                break
            merit = _al_merit(problem, ws, cand_state)
            if not np.isfinite(merit):
                break
            if merit < best_merit:
                best, best_merit = cand_state, merit
    return best


def _saddle_escape(problem, ws, state, ruiz_scale, settings):
    """Escape kick when the converged iterate sits at a saddle, else None."""
    M = ws.assemble(state)
    if ruiz_scale is None:
        ruiz_scale, _ = ruiz_equilibrate(M, settings.ruiz_iters, settings.ruiz_tol)
    try:
        factors = ldl_factor(M.scaled(ruiz_scale),
                             reg=settings.static_reg * ws.sign_pattern,
                             symbolic=ws.ldl_symbolic)
    except ZeroPivotError:
        return None
    if factors.inertia == expected_inertia(ws.n, ws.m, ws.p):
        return None
    return _escape_direction(problem, ws, state, factors, ruiz_scale)


class _LineSearchFailed(Exception):
    pass
