"""Solver behavior: toy problems, line search, outer loop, determinism."""

import numpy as np
import pytest

from lcqp import SolverSettings, SolveStatus, build_problem, initialize, solve
from lcqp.errors import WrongInertia
from lcqp.kkt import KktWorkspace
from lcqp.problem import ViolationReport
from lcqp.solver import Filter, filter_line_search, newton_direction, outer_update


def toy_lcqp(g=(-2.0, -2.0)):
    return build_problem(
        np.eye(2), np.asarray(g),
        L=np.array([[1.0, 0.0]]), l=np.zeros(1),
        R=np.array([[0.0, 1.0]]), r=np.zeros(1),
    )


class TestInitialize:
    def test_manifold_identity(self):
        prob = toy_lcqp()
        st = initialize(prob, SolverSettings(kappa0=0.1))
        from lcqp.retraction import softplus

        s = softplus(st.sigma, st.kappa)
        np.testing.assert_allclose(s, np.sqrt(0.1), rtol=1e-12)
        assert st.rho == 10.0 and st.kappa == 0.1

    def test_default_zero_guess(self):
        prob = build_problem(np.eye(3), np.zeros(3))
        st = initialize(prob, SolverSettings())
        np.testing.assert_array_equal(st.z, np.zeros(3))

    def test_lambda_w_matches_parameterization(self):
        prob = build_problem(np.eye(1), np.zeros(1),
                             A=np.array([[1.0]]), b=np.zeros(1))
        st = initialize(prob, SolverSettings(kappa0=1.0))
        np.testing.assert_allclose(st.lam_w, [-1.0])

    def test_bad_guess_length(self):
        with pytest.raises(ValueError):
            initialize(toy_lcqp(), SolverSettings(), z0=np.zeros(3))


class TestNewtonDirection:
    def test_pure_qp_step(self):
        rng = np.random.default_rng(0)
        B = rng.standard_normal((3, 3))
        Q = B @ B.T + np.eye(3)
        g = rng.standard_normal(3)
        prob = build_problem(Q, g)
        st = initialize(prob, SolverSettings())
        st.z = rng.standard_normal(3)
        step = newton_direction(prob, st)
        np.testing.assert_allclose(step, -np.linalg.solve(Q, Q @ st.z + g),
                                   rtol=1e-9, atol=1e-12)

    def test_wrong_inertia_then_regularized(self):
        prob = build_problem(np.array([[-1.0]]), np.zeros(1))
        st = initialize(prob, SolverSettings())
        st.z = np.array([1.0])
        with pytest.raises(WrongInertia):
            newton_direction(prob, st, delta=0.0)
        step = newton_direction(prob, st, delta=100.0)
        assert np.all(np.isfinite(step))

    def test_zero_residual_zero_step(self):
        prob = build_problem(np.eye(2), np.zeros(2))
        st = initialize(prob, SolverSettings())
        step = newton_direction(prob, st)
        np.testing.assert_allclose(step, np.zeros(2), atol=1e-15)


class TestFilter:
    def test_dominating_improvement_accepted_full_step(self):
        prob = build_problem(np.eye(1), np.array([-1.0]))
        ws = KktWorkspace(prob)
        st = initialize(prob, SolverSettings())
        r = ws.residual(st)
        filt = Filter(1e-5)
        out = filter_line_search(ws, st, np.array([1.0]), filt, SolverSettings(), r)
        assert out is not None
        _, _, tau = out
        assert tau == 1.0

    def test_ascent_direction_rejected(self):
        prob = build_problem(np.eye(1), np.array([-1.0]))
        ws = KktWorkspace(prob)
        st = initialize(prob, SolverSettings())
        r = ws.residual(st)
        filt = Filter(1e-5)
        out = filter_line_search(ws, st, np.array([-5.0]), filt, SolverSettings(), r)
        assert out is None

    def test_nondominated_mixed_move_accepted(self):
        filt = Filter(1e-5)
        filt.add(1.0, 1.0)
        filt.add(0.2, 3.0)
        # candidate improves theta versus current (2.0, 0.5), worsens phi,
        # and escapes domination by both entries
        assert filt.acceptable(theta=0.5, phi=0.9, theta_cur=2.0, phi_cur=0.5)

    def test_dominated_rejected(self):
        filt = Filter(1e-5)
        filt.add(0.1, 0.1)
        assert not filt.acceptable(theta=0.5, phi=0.9, theta_cur=2.0, phi_cur=0.5)

    def test_prune_dominated_entries(self):
        filt = Filter(1e-5)
        filt.add(1.0, 1.0)
        filt.add(0.5, 0.5)  # dominates the first
        assert len(filt.entries) == 1
        assert filt.entries[0].theta == 0.5


class TestOuterUpdate:
    def _state(self, rho, kappa):
        prob = toy_lcqp()
        st = initialize(prob, SolverSettings())
        st.rho, st.kappa = rho, kappa
        st.lam_w = np.zeros(0)
        return st

    def test_rho_grows_first(self):
        st = self._state(10.0, 0.1)
        bad = ViolationReport(1.0, 0.0, 0.0)
        assert outer_update(st, SolverSettings(), bad) == "rho"
        assert st.rho == 100.0 and st.kappa == 0.1

    def test_kappa_shrinks_at_rho_max(self):
        st = self._state(1e7, 0.1)
        st.lam_sig = np.array([1.0, 2.0])
        bad = ViolationReport(1.0, 0.0, 0.0)
        assert outer_update(st, SolverSettings(), bad) == "kappa"
        assert st.kappa == 0.05
        np.testing.assert_array_equal(st.beta, [1.0, 2.0])

    def test_kappa_floor_clamps(self):
        st = self._state(1e7, 1e-9)
        bad = ViolationReport(1.0, 0.0, 0.0)
        assert outer_update(st, SolverSettings(), bad) == "kappa"
        assert st.kappa == 1e-9

    def test_solved_requires_small_kappa(self):
        st = self._state(1e7, 0.05)
        good = ViolationReport(0.0, 0.0, 0.0)
        # feasible but kappa far above the complementarity tolerance
        assert outer_update(st, SolverSettings(), good) == "kappa"
        st.kappa = 1e-9
        assert outer_update(st, SolverSettings(), good) == "solved"


class TestSolve:
    def test_unconstrained_qp(self):
        prob = build_problem(np.array([[1.0]]), np.array([-1.0]))
        res = solve(prob)
        assert res.status is SolveStatus.SOLVED
        np.testing.assert_allclose(res.z, [1.0], atol=1e-9)
        assert res.objective == pytest.approx(-0.5, abs=1e-9)

    def test_single_active_bound(self):
        prob = build_problem(np.array([[1.0]]), np.zeros(1),
                             A=np.array([[1.0]]), b=np.array([-1.0]))
        res = solve(prob)
        assert res.status is SolveStatus.SOLVED
        np.testing.assert_allclose(res.z, [1.0], atol=1e-6)

    def test_symmetric_toy_escapes_saddle(self):
        res = solve(toy_lcqp())
        assert res.status is SolveStatus.SOLVED
        assert res.objective == pytest.approx(-2.0, abs=1e-6)
        assert res.violations.comp_viol <= 1e-8
        zs = np.sort(res.z)
        np.testing.assert_allclose(zs, [0.0, 2.0], atol=1e-6)

    def test_asymmetric_toy_global(self):
        res = solve(toy_lcqp(g=(-2.0, -3.0)))
        assert res.status is SolveStatus.SOLVED
        assert res.objective == pytest.approx(-4.5, abs=1e-6)

    def test_branch_infeasibility_selects_other_side(self):
        # s = z, t = z + 1: fixing t = 0 forces z = -1 making s < 0, so
        # only the s = 0 branch is feasible
        prob = build_problem(
            np.eye(1), np.array([1.0]),
            L=np.array([[1.0]]), l=np.zeros(1),
            R=np.array([[1.0]]), r=np.ones(1),
        )
        res = solve(prob)
        assert res.status is SolveStatus.SOLVED
        np.testing.assert_allclose(res.z, [0.0], atol=1e-6)

    def test_monotone_continuation(self):
        res = solve(toy_lcqp(g=(-2.0, -3.0)))
        rhos = [t.rho for t in res.trace]
        kappas = [t.kappa for t in res.trace]
        assert all(a <= b for a, b in zip(rhos, rhos[1:]))
        assert all(a >= b for a, b in zip(kappas, kappas[1:]))

    def test_solved_contract(self):
        from lcqp import violations

        prob = toy_lcqp(g=(-2.0, -3.0))
        res = solve(prob)
        st = res.settings
        vio = violations(prob, res.z, s=res.s, t=res.t, w=res.w)
        assert vio.passes(st.eps_eq, st.eps_ineq, st.eps_comp)

    def test_determinism(self):
        prob = toy_lcqp(g=(-2.0, -3.0))
        r1 = solve(prob)
        r2 = solve(prob)
        np.testing.assert_array_equal(r1.z, r2.z)
        np.testing.assert_array_equal(r1.lam_sig, r2.lam_sig)
        assert r1.iterations == r2.iterations
        assert [(t.rho, t.kappa, t.res_norm) for t in r1.trace] == \
            [(t.rho, t.kappa, t.res_norm) for t in r2.trace]

    def test_on_manifold_at_every_iterate(self):
        from lcqp.retraction import softplus

        prob = toy_lcqp(g=(-2.0, -3.0))
        checked = []

        def cb(k, st):
            if prob.p:
                s = softplus(st.sigma, st.kappa)
                t = softplus(-st.sigma, st.kappa)
                checked.append(np.max(np.abs(s * t - st.kappa)) <= 1e-8 * st.kappa)

        res = solve(prob, callback=cb)
        assert res.status is SolveStatus.SOLVED
        assert len(checked) == res.iterations + 1
        assert all(checked)

    def test_indefinite_q_bounded(self):
        prob = build_problem(
            np.diag([-1.0]), np.zeros(1),
            A=np.array([[1.0], [-1.0]]), b=np.array([1.0, 1.0]),
        )
        res = solve(prob)
        assert res.status is SolveStatus.SOLVED
        # minimum of -z^2/2 on [-1, 1] is at either end
        assert abs(abs(res.z[0]) - 1.0) <= 1e-6

    def test_settings_validation(self):
        with pytest.raises(ValueError):
            SolverSettings(gamma_kappa=1.5).check()
        with pytest.raises(ValueError):
            SolverSettings(gamma_rho=0.5).check()
        with pytest.raises(ValueError):
            SolverSettings(kappa_min=1.0, kappa0=0.1).check()


class TestQpEquivalence:
    def test_random_qps_match_active_set_oracle(self):
        import sys, pathlib

        sys.path.insert(0, str(pathlib.Path(__file__).parent))
        from corpus import random_qp

        from lcqp.oracle import solve_qp_active_set

        rng = np.random.default_rng(7)
        for _ in range(15):
            prob = random_qp(rng)
            res = solve(prob)
            assert res.status is SolveStatus.SOLVED
            z_ref, _ = solve_qp_active_set(
                prob.q_full().toarray(), prob.g,
                G=prob.A.toarray(), h=prob.b,
            )
            assert np.max(np.abs(res.z - z_ref)) <= 1e-6
