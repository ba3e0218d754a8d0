"""Benchmark generators: structure, layouts, sign encoding, determinism.

Full solves of the default presets live in the acceptance suite; these
tests cover the transcription itself and solve only miniature instances.
"""

import numpy as np
import pytest

from lcqp import solve, validate, violations
from lcqp.benchmarks import (
    GatesParams,
    HopperParams,
    LcqpBuilder,
    RocketParams,
    build_hopper,
    build_quadrotor_gates,
    build_rocket_stc,
    encode_sign,
    gates_paper_scale,
    hopper_heightmap,
    hopper_paper_scale,
    rocket_paper_scale,
)

BUILDERS = [
    (build_hopper, HopperParams),
    (build_rocket_stc, RocketParams),
    (build_quadrotor_gates, GatesParams),
]


class TestStructure:
    @pytest.mark.parametrize("builder,params_cls", BUILDERS)
    def test_validates_and_layout_covers(self, builder, params_cls):
        prob, layout = builder(params_cls())
        validate(prob)  # idempotent revalidation must succeed
        assert layout.covers(prob.n)
        assert layout.eq_pairs
        rows = problem_rows = prob.A.shape[0]
        for i, j in layout.eq_pairs:
            assert 0 <= i < rows and 0 <= j < rows

    @pytest.mark.parametrize("builder,params_cls", BUILDERS)
    def test_deterministic(self, builder, params_cls):
        p1, _ = builder(params_cls())
        p2, _ = builder(params_cls())
        assert (p1.Q != p2.Q).nnz == 0
        assert (p1.A != p2.A).nnz == 0
        np.testing.assert_array_equal(p1.b, p2.b)

    def test_paper_scale_dimensions(self):
        hp, _ = build_hopper(hopper_paper_scale())
        rp, _ = build_rocket_stc(rocket_paper_scale())
        gp, _ = build_quadrotor_gates(gates_paper_scale())
        # stretch presets land in the vicinity of the published sizes
        assert 1400 <= hp.n <= 1700
        assert 600 <= rp.n <= 750
        assert 1550 <= gp.n <= 1850

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            build_hopper(HopperParams(horizon=1))
        with pytest.raises(ValueError):
            build_hopper(HopperParams(mu=-1.0))
        with pytest.raises(ValueError):
            build_rocket_stc(RocketParams(trigger_height=0.1, catch_height=1.0))
        with pytest.raises(ValueError):
            build_quadrotor_gates(GatesParams(gates=()))

    def test_flat_ground_degenerates(self):
        prob, layout = build_hopper(HopperParams(horizon=4, stairs=(), stand_steps=1))
        # d reduces to the raw foot height: no sign variables at all
        assert layout.extract(np.zeros(prob.n), "stair_signs").size == 0
        assert prob.p == 3  # only the contact pairs remain

    def test_frictionless_cone_collapses(self):
        prob, layout = build_hopper(HopperParams(horizon=4, mu=0.0, stairs=(), stand_steps=1))
        idx = layout.slices["friction_force"]
        rows = prob.A.toarray()
        b = prob.b
        # the two cone rows per step force ff = 0 when mu = 0
        z = np.zeros(prob.n)
        z[np.asarray(idx)] = 0.3
        assert violations(prob, z).ineq_viol >= 0.3


class TestEncodeSign:
    def _kkt_feasible(self, x, s, lp, lm, tol=1e-9):
        if abs(-x + lp - lm) > tol:
            return False
        if lp < -tol or lm < -tol or abs(s) > 1 + tol:
            return False
        return min(1 - s, lp) <= tol and min(1 + s, lm) <= tol

    def test_positive_x_forces_plus_one(self):
        assert self._kkt_feasible(2.0, 1.0, 2.0, 0.0)
        assert not self._kkt_feasible(2.0, -1.0, 0.0, 0.0)
        assert not self._kkt_feasible(2.0, 0.2, 2.2, 0.2)

    def test_negative_x_mirrors(self):
        assert self._kkt_feasible(-2.0, -1.0, 0.0, 2.0)
        assert not self._kkt_feasible(-2.0, 1.0, 0.0, 2.0)

    def test_zero_x_any_sign(self):
        for s in (-1.0, -0.3, 0.0, 0.8, 1.0):
            assert self._kkt_feasible(0.0, s, 0.0, 0.0)

    def test_builder_rows(self):
        b = LcqpBuilder()
        x = b.var(1)[0]
        s, (lp, lm) = encode_sign(b, [(x, 1.0)], 0.0)
        prob = b.build()
        assert prob.p == 2
        # stationarity rows present as a recorded pair
        assert len(b.eq_pairs) == 1

    def test_solved_sign_value(self):
        # x pinned at 1.5 by a strong quadratic; s must come out +1
        b = LcqpBuilder()
        x = b.var(1)[0]
        b.add_sq(x, 10.0, center=1.5)
        s, _ = encode_sign(b, [(x, 1.0)], 0.0)
        prob = b.build()
        res = solve(prob)
        assert res.solved
        assert res.z[x] == pytest.approx(1.5, abs=1e-6)
        assert res.z[s] == pytest.approx(1.0, abs=1e-5)


class TestHeightmap:
    def test_profile(self):
        pr = HopperParams()
        xs = np.array([-1.0, 0.6, 1.0, 1.6, 2.0])
        h = hopper_heightmap(pr, xs)
        np.testing.assert_allclose(h, [0.0, 0.15, 0.3, 0.15, 0.0], atol=1e-12)

    def test_signed_distance_in_problem(self):
        pr = HopperParams(horizon=3, stairs=((0.5, 0.2),), stand_steps=1)
        prob, layout = build_hopper(pr)
        # put the foot above the step with the sign variable at +1 and
        # verify the d >= 0 rows see d = zf - 0.2
        z = np.zeros(prob.n)
        z[np.asarray(layout.slices["foot_x"])] = 1.0
        z[np.asarray(layout.slices["foot_z"])] = 0.45
        z[np.asarray(layout.slices["stair_signs"]).ravel()] = 1.0
        rep = violations(prob, z)
        # d = 0.45 - 0.2 = 0.25 > 0: no inequality violation from d rows
        # (dynamics equality rows are of course violated; ineq counts those)
        s_aff = prob.L @ z + prob.l
        assert np.all(s_aff[-(pr.horizon - 1):] >= 0.2)


class TestMiniatureSolves:
    def test_tiny_rocket_solves(self):
        pr = RocketParams(horizon=8, dt=0.8, initial_state=(-1.5, 4.0, 0.8, -0.4, 0.0, 0.0))
        prob, layout = build_rocket_stc(pr)
        res = solve(prob, pr.solver_settings())
        assert res.solved
        y = layout.extract(res.z, "y")
        x = layout.extract(res.z, "x")
        th = layout.extract(res.z, "theta")
        gim = layout.extract(res.z, "gimbal")
        for k in range(pr.horizon - 1):
            if pr.trigger_height - y[k] > 1e-6:
                h1 = x[k] - pr.half_length * th[k]
                h2 = x[k] + pr.half_length * th[k]
                h3 = th[k] + gim[k]
                assert min(h1, h2, h3) >= -1e-6

    def test_tiny_gates_solves(self):
        from lcqp.benchmarks import Gate

        pr = GatesParams(
            horizon=10, dt=0.4,
            gates=(Gate(center=(1.2, 0.3), angle=0.0, half_extents=(0.08, 0.4)),),
            target=(2.5, 0.0),
        )
        prob, layout = build_quadrotor_gates(pr)
        res = solve(prob, pr.solver_settings())
        assert res.solved
        gam = layout.extract(res.z, "progress")
        assert gam[0, -1] == pytest.approx(1.0, abs=1e-6)
