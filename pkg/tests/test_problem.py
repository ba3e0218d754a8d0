"""Problem validation, objective and violation metrics."""

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from lcqp import (
    DimensionMismatch,
    NonFiniteEntry,
    NonSymmetricQ,
    build_problem,
    objective,
    validate,
    violations,
)


def toy(p=1, m=0):
    return build_problem(
        np.eye(2), np.array([-2.0, -2.0]),
        A=np.ones((m, 2)) if m else None, b=np.zeros(m) if m else None,
        L=np.array([[1.0, 0.0]])[:p], l=np.zeros(p),
        R=np.array([[0.0, 1.0]])[:p], r=np.zeros(p),
    )


class TestValidate:
    def test_consistent_dimensions_accepted(self):
        prob = toy()
        assert (prob.n, prob.m, prob.p) == (2, 0, 1)

    def test_asymmetric_q_rejected(self):
        Q = np.array([[1.0, 1.0], [0.0, 1.0]])
        # full lower entry present but unequal -> asymmetric
        Q[1, 0] = 0.5
        with pytest.raises(NonSymmetricQ):
            build_problem(Q, np.zeros(2))

    def test_upper_triangle_input_accepted(self):
        Q = sp.csc_array(np.array([[1.0, 2.0], [0.0, 3.0]]))
        prob = build_problem(Q, np.zeros(2))
        full = prob.q_full().toarray()
        np.testing.assert_allclose(full, [[1.0, 2.0], [2.0, 3.0]])

    def test_shape_contradiction(self):
        with pytest.raises(DimensionMismatch):
            build_problem(np.eye(3), np.zeros(3), A=np.ones((3, 2)), b=np.zeros(3))

    def test_nonfinite_rejected(self):
        with pytest.raises(NonFiniteEntry):
            build_problem(np.eye(1), np.array([np.nan]))

    def test_idempotent(self):
        prob = toy()
        again = validate(prob)
        assert (again.Q != prob.Q).nnz == 0
        np.testing.assert_array_equal(again.g, prob.g)

    def test_symmetrization_preserves_objective(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            n = int(rng.integers(1, 6))
            Qr = rng.standard_normal((n, n))
            Qs = (Qr + Qr.T) / 2
            z = rng.standard_normal(n)
            g = rng.standard_normal(n)
            prob = build_problem(Qs, g)
            direct = 0.5 * z @ Qs @ z + g @ z
            assert objective(prob, z) == pytest.approx(direct, rel=1e-12)


class TestObjective:
    def test_hand_value(self):
        prob = build_problem(np.eye(2), np.array([-2.0, -2.0]))
        assert objective(prob, np.array([2.0, 0.0])) == pytest.approx(-2.0)

    def test_zero_vector(self):
        assert objective(toy(), np.zeros(2)) == 0.0

    def test_linear_only(self):
        prob = build_problem(np.zeros((2, 2)), np.array([1.0, 1.0]))
        assert objective(prob, np.array([3.0, 4.0])) == pytest.approx(7.0)

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            objective(toy(), np.zeros(3))


class TestViolations:
    def test_exact_complementarity(self):
        prob = toy()
        rep = violations(prob, np.array([0.0, 5.0]))
        assert rep.comp_viol == 0.0
        assert rep.ineq_viol == 0.0
        assert rep.eq_viol == 0.0

    def test_min_of_clipped_pair(self):
        prob = toy()
        rep = violations(prob, np.array([1e-3, 1e-3]))
        assert rep.comp_viol == pytest.approx(1e-3)

    def test_negative_slack_magnitude(self):
        prob = build_problem(np.eye(2), np.zeros(2),
                             A=np.array([[1.0, 0.0]]), b=np.array([-0.2]))
        rep = violations(prob, np.zeros(2))
        assert rep.ineq_viol == pytest.approx(0.2)

    def test_reported_slack_drift(self):
        prob = toy()
        rep = violations(prob, np.array([1.0, 0.0]), s=np.array([1.5]),
                         t=np.array([0.0]))
        assert rep.eq_viol == pytest.approx(0.5)

    def test_sign_violations_counted_in_ineq_not_comp(self):
        prob = toy()
        rep = violations(prob, np.array([-1.0, 2.0]))
        assert rep.ineq_viol == pytest.approx(1.0)
        assert rep.comp_viol == 0.0  # min(clip(-1), clip(2)) = 0

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_comp_viol_bound_property(self, seed):
        rng = np.random.default_rng(seed)
        n, p = 3, 2
        prob = build_problem(
            np.eye(n), np.zeros(n),
            L=rng.standard_normal((p, n)), l=rng.standard_normal(p),
            R=rng.standard_normal((p, n)), r=rng.standard_normal(p),
        )
        z = rng.standard_normal(n)
        rep = violations(prob, z)
        s = prob.L @ z + prob.l
        t = prob.R @ z + prob.r
        per_pair = np.minimum(np.maximum(s, 0.0), np.maximum(t, 0.0))
        assert rep.comp_viol == pytest.approx(np.max(per_pair))
        assert rep.comp_viol >= 0.0
        assert rep.ineq_viol >= 0.0
