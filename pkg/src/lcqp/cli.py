"""Command-line front end: solve, generate, check and oracle subcommands.

Exit codes: 0 = solved (or check passed), 1 = solver/check failure,
2 = usage or I/O error.  Diagnostics go to stderr; the MARBLE_LOG
environment variable (off | info | debug) controls verbosity.
"""

import argparse
import logging
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .benchmarks import (
    GatesParams,
    HopperParams,
    RocketParams,
    build_hopper,
    build_quadrotor_gates,
    build_rocket_stc,
    gates_paper_scale,
    hopper_paper_scale,
    rocket_paper_scale,
)
from .errors import LcqpError
from .io import parse_problem, parse_result, serialize_problem, serialize_result
from .oracle import global_solve
from .problem import objective, violations
from .solver import SolverSettings, solve

log = logging.getLogger("lcqp")


def _setup_logging():
    level = os.environ.get("MARBLE_LOG", "off").lower()
    if level == "debug":
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr,
                            format="%(name)s: %(message)s")
    elif level == "info":
        logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                            format="%(name)s: %(message)s")
    else:
        logging.basicConfig(level=logging.CRITICAL, stream=sys.stderr)


def _add_settings_flags(p):
    p.add_argument("--max-iter", type=int, default=None, help="total Newton iteration cap")
    p.add_argument("--eps-res", type=float, default=None, help="KKT residual tolerance")
    p.add_argument("--eps-eq", type=float, default=None, help="equality tolerance")
    p.add_argument("--eps-ineq", type=float, default=None, help="inequality tolerance")
    p.add_argument("--eps-comp", type=float, default=None, help="complementarity tolerance")
    p.add_argument("--kappa0", type=float, default=None, help="initial relaxation")
    p.add_argument("--kappa-min", type=float, default=None, help="relaxation floor")
    p.add_argument("--rho0", type=float, default=None, help="initial penalty")


def _settings_from_args(args):
    st = SolverSettings()
    overrides = {
        "max_iters": args.max_iter, "eps_res": args.eps_res,
        "eps_eq": args.eps_eq, "eps_ineq": args.eps_ineq,
        "eps_comp": args.eps_comp, "kappa0": args.kappa0,
        "kappa_min": args.kappa_min, "rho0": args.rho0,
    }
    fields = {k: v for k, v in overrides.items() if v is not None}
    return replace(st, **fields) if fields else st


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    except OSError as exc:
        raise _UsageError(f"cannot write {path}: {exc.strerror}") from None


class _UsageError(Exception):
    pass


def _cmd_solve(args):
    problem, guess, _ = parse_problem(_read(args.problem), strict=args.strict)
    settings = _settings_from_args(args)
    z0 = guess
    if args.initial_guess:
        import json

        doc = json.loads(_read(args.initial_guess))
        z0 = np.asarray(doc["z0"] if isinstance(doc, dict) else doc, dtype=float)
    result = solve(problem, settings, z0=z0)
    extra = {}
    if args.trace:
        for rec in result.trace:
            print(
                f"rho={rec.rho:.1e} kappa={rec.kappa:.2e} steps={rec.newton_steps} "
                f"delta={rec.delta_max:.1e} residual={rec.res_norm:.2e}",
                file=sys.stderr,
            )
    text = serialize_result(result, extra=extra)
    if args.output:
        _write(args.output, text)
    else:
        print(text)
    log.info("status: %s objective: %.9g", result.status.value, result.objective)
    return 0 if result.solved else 1


def _cmd_generate(args):
    presets = {
        "hopper": (HopperParams, hopper_paper_scale, build_hopper),
        "rocket": (RocketParams, rocket_paper_scale, build_rocket_stc),
        "gates": (GatesParams, gates_paper_scale, build_quadrotor_gates),
    }
    cls, paper_scale, builder = presets[args.problem_name]
    params = paper_scale() if args.paper_scale else cls()
    if args.horizon:
        params = replace(params, horizon=args.horizon)
    if args.dt:
        params = replace(params, dt=args.dt)
    problem, layout = builder(params)
    text = serialize_problem(problem, eq_pairs=layout.eq_pairs, indent=2)
    if args.output:
        _write(args.output, text)
    else:
        print(text)
    if args.layout:
        import json

        _write(args.layout, json.dumps(layout.to_json_dict(), indent=2))
    log.info("generated %s: n=%d m=%d p=%d", args.problem_name,
             problem.n, problem.m, problem.p)
    return 0


def _cmd_check(args):
    problem, _, eq_pairs = parse_problem(_read(args.problem))
    doc = parse_result(_read(args.result))
    z = doc["z"]
    if z.shape != (problem.n,):
        print(f"check: z has length {z.shape[0]}, expected {problem.n}", file=sys.stderr)
        return 1
    vio = violations(
        problem, z,
        s=doc.get("s") if doc.get("s") is not None and len(doc.get("s", [])) else None,
        t=doc.get("t") if doc.get("t") is not None and len(doc.get("t", [])) else None,
        w=doc.get("w") if doc.get("w") is not None and len(doc.get("w", [])) else None,
    )
    obj = objective(problem, z)
    obj_err = abs(obj - float(doc["objective"])) / max(1.0, abs(obj))
    eq_rows = 0.0
    if eq_pairs:
        resid = problem.A @ z + problem.b
        eq_rows = max(abs(float(resid[i])) for pair in eq_pairs for i in pair)
    print(f"objective: reported {doc['objective']:.9g} recomputed {obj:.9g}")
    print(f"violations: eq={vio.eq_viol:.3e} ineq={vio.ineq_viol:.3e} "
          f"comp={vio.comp_viol:.3e} eq_rows={eq_rows:.3e}")
    ok = (
        doc["status"] == "solved"
        and vio.passes(args.eps_eq, args.eps_ineq, args.eps_comp)
        and obj_err <= 1e-6
    )
    print("check:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_oracle(args):
    problem, _, _ = parse_problem(_read(args.problem))
    res = global_solve(problem, max_pairs=args.max_pairs)
    import json

    if res.status != "optimal":
        print(json.dumps({"schema": "lcqp-result/1", "status": "infeasible"}))
        return 1
    s = problem.L @ res.z + problem.l
    t = problem.R @ res.z + problem.r
    vio = violations(problem, res.z)
    doc = {
        "schema": "lcqp-result/1",
        "status": "solved",
        "z": list(map(float, res.z)),
        "s": list(map(float, s)),
        "t": list(map(float, t)),
        "w": list(map(float, problem.A @ res.z + problem.b)),
        "objective": res.objective,
        "violations": {"eq": vio.eq_viol, "ineq": vio.ineq_viol, "comp": vio.comp_viol},
        "assignment": list(map(int, res.assignment.right_zero)),
        "optimal_assignments": [
            list(map(int, a.right_zero)) for a in res.optimal_assignments
        ],
    }
    text = json.dumps(doc, indent=2)
    if args.output:
        _write(args.output, text)
    else:
        print(text)
    return 0


def make_parser():
    parser = argparse.ArgumentParser(
        prog="lcqp",
        description="Solve quadratic programs with linear complementarity constraints.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("problem")
    p.add_argument("--output", help="write the result file here instead of stdout")
    p.add_argument("--initial-guess", help="JSON file with z0")
    p.add_argument("--trace", action="store_true", help="print per-stage records to stderr")
    p.add_argument("--strict", action="store_true", help="reject unknown problem fields")
    _add_settings_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("generate", help="write a benchmark problem file")
    p.add_argument("problem_name", choices=["hopper", "rocket", "gates"])
    p.add_argument("--output", help="problem file destination (default stdout)")
    p.add_argument("--layout", help="also write the trajectory layout here")
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--paper-scale", action="store_true",
                   help="use the dimension-matching large preset")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("check", help="recompute violations for a result file")
    p.add_argument("problem")
    p.add_argument("result")
    p.add_argument("--eps-eq", type=float, default=1e-8)
    p.add_argument("--eps-ineq", type=float, default=1e-8)
    p.add_argument("--eps-comp", type=float, default=1e-8)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("oracle", help="brute-force global solve (small problems)")
    p.add_argument("problem")
    p.add_argument("--output")
    p.add_argument("--max-pairs", type=int, default=14)
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None):
    _setup_logging()
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"lcqp: {exc}", file=sys.stderr)
        return 2
    except LcqpError as exc:
        print(f"lcqp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"lcqp: internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
