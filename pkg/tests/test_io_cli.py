"""Wire formats and the command-line front end."""

import json
import subprocess
import sys

import numpy as np
import pytest

from lcqp import build_problem
from lcqp.errors import SchemaError
from lcqp.io import parse_problem, parse_result, serialize_problem, serialize_result


def random_problem(rng):
    n = int(rng.integers(1, 7))
    m = int(rng.integers(0, 4))
    p = int(rng.integers(0, 4))
    B = rng.standard_normal((n, n))
    return build_problem(
        B @ B.T, rng.standard_normal(n),
        A=rng.standard_normal((m, n)) if m else None,
        b=rng.standard_normal(m) if m else None,
        L=rng.standard_normal((p, n)) if p else None,
        l=rng.standard_normal(p) if p else None,
        R=rng.standard_normal((p, n)) if p else None,
        r=rng.standard_normal(p) if p else None,
        name="random",
    )


class TestProblemFile:
    def test_minimal_file(self):
        text = json.dumps({
            "schema": "lcqp-problem/1",
            "dims": {"n": 1, "m": 0, "p": 0},
            "Q": {"rows": 1, "cols": 1, "triplets": [[0, 0, 1.0]]},
            "g": [-1.0],
            "A": {"rows": 0, "cols": 1, "triplets": []},
            "b": [],
            "L": {"rows": 0, "cols": 1, "triplets": []},
            "l": [],
            "R": {"rows": 0, "cols": 1, "triplets": []},
            "r": [],
        })
        prob, guess, eq_pairs = parse_problem(text)
        assert (prob.n, prob.m, prob.p) == (1, 0, 0)
        assert guess is None and eq_pairs == []

    def test_column_out_of_range(self):
        text = json.dumps({
            "schema": "lcqp-problem/1",
            "dims": {"n": 1, "m": 0, "p": 0},
            "Q": {"rows": 1, "cols": 1, "triplets": [[0, 1, 1.0]]},
            "g": [0.0],
            "A": {"rows": 0, "cols": 1, "triplets": []}, "b": [],
            "L": {"rows": 0, "cols": 1, "triplets": []}, "l": [],
            "R": {"rows": 0, "cols": 1, "triplets": []}, "r": [],
        })
        with pytest.raises(SchemaError, match="column index out of range"):
            parse_problem(text)

    def test_duplicate_triplets_summed(self):
        text = json.dumps({
            "schema": "lcqp-problem/1",
            "dims": {"n": 1, "m": 1, "p": 0},
            "Q": {"rows": 1, "cols": 1, "triplets": [[0, 0, 1.0], [0, 0, 2.0]]},
            "g": [0.0],
            "A": {"rows": 1, "cols": 1, "triplets": [[0, 0, 1.0], [0, 0, 2.0]]},
            "b": [0.0],
            "L": {"rows": 0, "cols": 1, "triplets": []}, "l": [],
            "R": {"rows": 0, "cols": 1, "triplets": []}, "r": [],
        })
        prob, _, _ = parse_problem(text)
        assert prob.Q.toarray()[0, 0] == 3.0
        assert prob.A.toarray()[0, 0] == 3.0

    def test_strict_rejects_unknown_fields(self):
        prob = build_problem(np.eye(1), np.zeros(1))
        doc = json.loads(serialize_problem(prob))
        doc["junk"] = 1
        parse_problem(json.dumps(doc))  # lax mode ignores it
        with pytest.raises(SchemaError, match="unknown fields"):
            parse_problem(json.dumps(doc), strict=True)

    def test_lower_triangle_q_rejected(self):
        text = json.dumps({
            "schema": "lcqp-problem/1",
            "dims": {"n": 2, "m": 0, "p": 0},
            "Q": {"rows": 2, "cols": 2, "triplets": [[1, 0, 1.0]]},
            "g": [0.0, 0.0],
            "A": {"rows": 0, "cols": 2, "triplets": []}, "b": [],
            "L": {"rows": 0, "cols": 2, "triplets": []}, "l": [],
            "R": {"rows": 0, "cols": 2, "triplets": []}, "r": [],
        })
        with pytest.raises(SchemaError, match="upper-triangle"):
            parse_problem(text)

    def test_roundtrip_bitwise_100(self):
        rng = np.random.default_rng(99)
        for _ in range(100):
            prob = random_problem(rng)
            text = serialize_problem(prob)
            back, _, _ = parse_problem(text)
            assert (back.Q != prob.Q).nnz == 0
            assert (back.A != prob.A).nnz == 0
            assert (back.L != prob.L).nnz == 0
            assert (back.R != prob.R).nnz == 0
            for a, b in ((back.g, prob.g), (back.b, prob.b),
                         (back.l, prob.l), (back.r, prob.r)):
                np.testing.assert_array_equal(a, b)
            # a second round trip is byte-identical
            assert serialize_problem(back) == text

    def test_initial_guess_roundtrip(self):
        prob = build_problem(np.eye(2), np.zeros(2))
        text = serialize_problem(prob, initial_guess=[0.25, -1.0],
                                 eq_pairs=[(0, 1)])
        _, guess, eq_pairs = parse_problem(text)
        np.testing.assert_array_equal(guess, [0.25, -1.0])
        assert eq_pairs == [(0, 1)]


class TestResultFile:
    def test_roundtrip(self):
        from lcqp import solve

        prob = build_problem(np.eye(1), np.array([-1.0]))
        res = solve(prob)
        doc = parse_result(serialize_result(res))
        assert doc["status"] == "solved"
        np.testing.assert_array_equal(doc["z"], res.z)
        assert doc["objective"] == res.objective
        assert doc["settings"]["rho0"] == 10.0
        assert len(doc["trace"]) == len(res.trace)

    def test_bad_schema(self):
        with pytest.raises(SchemaError):
            parse_result(json.dumps({"schema": "nope"}))


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "lcqp.cli", *args],
        capture_output=True, text=True, cwd=cwd,
    )


class TestCli:
    @pytest.fixture()
    def tiny_qp(self, tmp_path):
        prob = build_problem(np.eye(1), np.array([-1.0]))
        path = tmp_path / "tiny.json"
        path.write_text(serialize_problem(prob))
        return path

    def test_solve_happy_path(self, tiny_qp):
        r = run_cli("solve", str(tiny_qp))
        assert r.returncode == 0
        doc = json.loads(r.stdout)
        assert doc["status"] == "solved"
        assert doc["z"][0] == pytest.approx(1.0)

    def test_missing_file_exit_2(self):
        r = run_cli("solve", "missing.json")
        assert r.returncode == 2
        assert "missing.json" in r.stderr

    def test_bad_usage_exit_2(self):
        r = run_cli("frobnicate")
        assert r.returncode == 2

    def test_flags_override_settings(self, tiny_qp, tmp_path):
        out = tmp_path / "res.json"
        r = run_cli("solve", str(tiny_qp), "--output", str(out),
                    "--eps-res", "1e-7", "--kappa0", "0.2", "--rho0", "5",
                    "--kappa-min", "1e-10", "--max-iter", "777")
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        st = doc["settings"]
        assert st["eps_res"] == 1e-7
        assert st["kappa0"] == 0.2
        assert st["rho0"] == 5.0
        assert st["kappa_min"] == 1e-10
        assert st["max_iters"] == 777

    def test_check_detects_tampering(self, tiny_qp, tmp_path):
        out = tmp_path / "res.json"
        assert run_cli("solve", str(tiny_qp), "--output", str(out)).returncode == 0
        assert run_cli("check", str(tiny_qp), str(out)).returncode == 0
        doc = json.loads(out.read_text())
        doc["z"][0] += 1.0
        out.write_text(json.dumps(doc))
        assert run_cli("check", str(tiny_qp), str(out)).returncode == 1

    def test_oracle_subcommand(self, tmp_path):
        prob = build_problem(
            np.eye(2), np.array([-2.0, -2.0]),
            L=np.array([[1.0, 0.0]]), l=np.zeros(1),
            R=np.array([[0.0, 1.0]]), r=np.zeros(1),
        )
        path = tmp_path / "toy.json"
        path.write_text(serialize_problem(prob))
        r = run_cli("oracle", str(path))
        assert r.returncode == 0
        doc = json.loads(r.stdout)
        assert doc["objective"] == pytest.approx(-2.0)
        assert len(doc["optimal_assignments"]) == 2

    def test_generate_solve_check_pipeline(self, tmp_path):
        # rocket is the fastest benchmark; hopper and gates run in the
        # acceptance suite
        pf = tmp_path / "rocket.json"
        lf = tmp_path / "rocket_layout.json"
        rf = tmp_path / "rocket_result.json"
        assert run_cli("generate", "rocket", "--output", str(pf),
                       "--layout", str(lf)).returncode == 0
        layout = json.loads(lf.read_text())
        assert layout["schema"] == "lcqp-layout/1"
        assert run_cli("solve", str(pf), "--output", str(rf)).returncode == 0
        assert run_cli("check", str(pf), str(rf)).returncode == 0

    def test_initial_guess_flag(self, tiny_qp, tmp_path):
        guess = tmp_path / "g.json"
        guess.write_text(json.dumps({"z0": [0.9]}))
        r = run_cli("solve", str(tiny_qp), "--initial-guess", str(guess))
        assert r.returncode == 0

    def test_version(self):
        r = run_cli("--version")
        assert r.returncode == 0
