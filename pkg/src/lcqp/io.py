"""Problem, result and layout files.

All wire formats are JSON.  Sparse matrices travel as 0-based triplet
lists under the upper-triangle convention for Q (symmetry implied) and
plain row/col/value triplets for the constraint Jacobians.  Numeric
round-trips are bitwise: floats serialize via repr and parse back to the
identical double.
"""

import json

import numpy as np
import scipy.sparse as sp

from .errors import SchemaError
from .problem import LcqpProblem, validate

__all__ = [
    "PROBLEM_SCHEMA",
    "RESULT_SCHEMA",
    "LAYOUT_SCHEMA",
    "serialize_problem",
    "parse_problem",
    "serialize_result",
    "parse_result",
]

PROBLEM_SCHEMA = "lcqp-problem/1"
RESULT_SCHEMA = "lcqp-result/1"
LAYOUT_SCHEMA = "lcqp-layout/1"

_PROBLEM_FIELDS = {
    "schema", "name", "dims", "Q", "g", "A", "b", "L", "l", "R", "r",
    "initial_guess", "eq_pairs",
}


def _matrix_to_json(M, rows, cols):
    coo = sp.coo_array(M)
    trips = [[int(i), int(j), float(v)] for i, j, v in zip(coo.row, coo.col, coo.data)]
    return {"rows": rows, "cols": cols, "triplets": trips}


def serialize_problem(problem, initial_guess=None, eq_pairs=None, indent=None):
    """Problem -> JSON text.  Q is written as its (canonical) upper triangle."""
    doc = {
        "schema": PROBLEM_SCHEMA,
        "dims": {"n": problem.n, "m": problem.m, "p": problem.p},
        "Q": _matrix_to_json(problem.Q, problem.n, problem.n),
        "g": list(map(float, problem.g)),
        "A": _matrix_to_json(problem.A, problem.m, problem.n),
        "b": list(map(float, problem.b)),
        "L": _matrix_to_json(problem.L, problem.p, problem.n),
        "l": list(map(float, problem.l)),
        "R": _matrix_to_json(problem.R, problem.p, problem.n),
        "r": list(map(float, problem.r)),
    }
    if problem.name:
        doc["name"] = problem.name
    if initial_guess is not None:
        doc["initial_guess"] = list(map(float, initial_guess))
    if eq_pairs:
        doc["eq_pairs"] = [[int(i), int(j)] for i, j in eq_pairs]
    return json.dumps(doc, indent=indent)


def _require(doc, field, kind, where):
    if field not in doc:
        raise SchemaError(f"{where}: missing field '{field}'")
    val = doc[field]
    if not isinstance(val, kind):
        raise SchemaError(f"{where}: field '{field}' has wrong type")
    return val


def _parse_matrix(doc, field, rows, cols):
    entry = _require(doc, field, dict, "problem")
    if _require(entry, "rows", int, field) != rows or \
            _require(entry, "cols", int, field) != cols:
        raise SchemaError(f"{field}: declared shape differs from dims")
    trips = _require(entry, "triplets", list, field)
    ri, ci, vi = [], [], []
    for k, t in enumerate(trips):
        if not (isinstance(t, list) and len(t) == 3):
            raise SchemaError(f"{field}: triplet {k} is not [i, j, value]")
        i, j, v = t
        if not isinstance(i, int) or not isinstance(j, int):
            raise SchemaError(f"{field}: triplet {k} has non-integer indices")
        if not 0 <= i < rows:
            raise SchemaError(f"{field}: triplet {k} row index out of range")
        if not 0 <= j < cols:
            raise SchemaError(f"{field}: triplet {k} column index out of range")
        ri.append(i); ci.append(j); vi.append(float(v))
    M = sp.coo_array((vi, (ri, ci)), shape=(rows, cols))
    M.sum_duplicates()
    return sp.csr_array(M)


def _parse_vector(doc, field, length):
    arr = _require(doc, field, list, "problem")
    if len(arr) != length:
        raise SchemaError(f"{field}: length {len(arr)}, expected {length}")
    try:
        return np.asarray([float(x) for x in arr])
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{field}: non-numeric entry ({exc})") from None


def parse_problem(text, strict=False):
    """JSON text -> validated problem (plus optional initial guess).

    Returns ``(problem, initial_guess_or_None, eq_pairs)``.  ``strict``
    rejects unknown top-level fields instead of ignoring them.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    if _require(doc, "schema", str, "problem") != PROBLEM_SCHEMA:
        raise SchemaError(f"unsupported schema '{doc['schema']}'")
    if strict:
        unknown = set(doc) - _PROBLEM_FIELDS
        if unknown:
            raise SchemaError(f"unknown fields: {sorted(unknown)}")

    dims = _require(doc, "dims", dict, "problem")
    try:
        n, m, p = int(dims["n"]), int(dims["m"]), int(dims["p"])
    except KeyError as exc:
        raise SchemaError(f"dims: missing {exc}") from None
    if n < 0 or m < 0 or p < 0:
        raise SchemaError("dims must be nonnegative")

    Q = _parse_matrix(doc, "Q", n, n)
    if sp.tril(Q, k=-1).nnz:
        raise SchemaError("Q: entries below the diagonal (upper-triangle storage)")
    raw = LcqpProblem(
        n=n, m=m, p=p,
        Q=Q.tocsc(),
        g=_parse_vector(doc, "g", n),
        A=_parse_matrix(doc, "A", m, n),
        b=_parse_vector(doc, "b", m),
        L=_parse_matrix(doc, "L", p, n),
        l=_parse_vector(doc, "l", p),
        R=_parse_matrix(doc, "R", p, n),
        r=_parse_vector(doc, "r", p),
        name=doc.get("name", ""),
    )
    problem = validate(raw)
    guess = None
    if "initial_guess" in doc:
        guess = _parse_vector(doc, "initial_guess", n)
    eq_pairs = [(int(i), int(j)) for i, j in doc.get("eq_pairs", [])]
    return problem, guess, eq_pairs


def serialize_result(result, extra=None, indent=2):
    """SolveResult -> JSON text (see the format reference in the README)."""
    from dataclasses import asdict

    doc = {
        "schema": RESULT_SCHEMA,
        "status": result.status.value,
        "z": list(map(float, result.z)),
        "s": list(map(float, result.s)),
        "t": list(map(float, result.t)),
        "w": list(map(float, result.w)),
        "lam_w": list(map(float, result.lam_w)),
        "lam_sigma": list(map(float, result.lam_sig)),
        "objective": float(result.objective),
        "violations": {
            "eq": result.violations.eq_viol,
            "ineq": result.violations.ineq_viol,
            "comp": result.violations.comp_viol,
        },
        "iterations": result.iterations,
        "trace": [
            {"rho": t.rho, "kappa": t.kappa, "residual": t.res_norm,
             "newton_steps": t.newton_steps, "delta_max": t.delta_max}
            for t in result.trace
        ],
        "settings": asdict(result.settings),
        "wall_time_sec": result.wall_time,
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=indent)


def parse_result(text):
    """JSON text -> plain dict with numpy arrays for the vector fields."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if doc.get("schema") != RESULT_SCHEMA:
        raise SchemaError(f"unsupported schema '{doc.get('schema')}'")
    for field in ("status", "z", "objective", "violations"):
        if field not in doc:
            raise SchemaError(f"result: missing field '{field}'")
    for field in ("z", "s", "t", "w", "lam_w", "lam_sigma"):
        if field in doc:
            doc[field] = np.asarray([float(x) for x in doc[field]])
    return doc
