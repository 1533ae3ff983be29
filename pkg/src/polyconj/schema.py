"""JSON wire format for problem files and reports.

Rationals travel as ``"p/q"`` (or ``"p"``) strings and extended values as
``"+inf"`` / ``"-inf"``, never as floats, so serialization round-trips bit
for bit.  A problem file carries named objects (polyhedra, mappings,
piecewise-linear functions, matrices) and an ordered task list; reports are
plain dictionaries rendered with sorted keys, which keeps output byte-stable
for golden-file comparisons.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .linalg import Mat, Vec
from .mapping import PolyMap
from .plfunc import PLFunction
from .polyhedron import Polyhedron
from .support import ExtReal, Qualification, RuleReport, SupportEval


class InputError(ValueError):
    """Malformed problem input; the CLI maps this to exit code 1."""


def parse_rational(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"bad rational {s!r}: {e}") from None
    raise InputError(f"rationals must be strings or integers, got {type(s).__name__}")


def rational_text(q: Fraction) -> str:
    return str(q)


def parse_vec(data, dim=None) -> Vec:
    if not isinstance(data, list):
        raise InputError("vector must be a JSON array")
    v = tuple(parse_rational(x) for x in data)
    if dim is not None and len(v) != dim:
        raise InputError(f"vector has length {len(v)}, expected {dim}")
    return v


def vec_json(v: Vec) -> list[str]:
    return [rational_text(x) for x in v]


def parse_matrix(data) -> Mat:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InputError("matrix must be a JSON array of arrays")
    rows = tuple(parse_vec(r) for r in data)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise InputError("matrix rows must all have the same length")
    return rows


def mat_json(A: Mat) -> list[list[str]]:
    return [vec_json(r) for r in A]


def parse_polyhedron(data) -> Polyhedron:
    if not isinstance(data, dict):
        raise InputError("polyhedron must be a JSON object")
    try:
        dim = int(data["dim"])
        A = parse_matrix(data.get("A", []))
        b = parse_vec(data.get("b", []))
    except KeyError as e:
        raise InputError(f"polyhedron is missing field {e}") from None
    try:
        return Polyhedron(A, b, dim)
    except ValueError as e:
        raise InputError(str(e)) from None


def polyhedron_json(P: Polyhedron) -> dict:
    return {"dim": P.dim, "A": mat_json(P.A), "b": vec_json(P.b)}


def parse_polymap(data) -> PolyMap:
    if not isinstance(data, dict):
        raise InputError("mapping must be a JSON object")
    try:
        n, p = int(data["n"]), int(data["p"])
        graph = parse_polyhedron(data["graph"])
    except KeyError as e:
        raise InputError(f"mapping is missing field {e}") from None
    try:
        return PolyMap(n, p, graph)
    except ValueError as e:
        raise InputError(str(e)) from None


def polymap_json(F: PolyMap) -> dict:
    return {"n": F.n, "p": F.p, "graph": polyhedron_json(F.graph)}


def parse_plfunction(data) -> PLFunction:
    if not isinstance(data, dict):
        raise InputError("plfunction must be a JSON object")
    try:
        n = int(data["n"])
        pieces = tuple((parse_vec(p["c"], n), parse_rational(p["d"]))
                       for p in data["pieces"])
        dom = (parse_polyhedron(data["dom"]) if "dom" in data
               else Polyhedron.universe(n))
    except (KeyError, TypeError) as e:
        raise InputError(f"bad plfunction: {e}") from None
    try:
        return PLFunction(n, pieces, dom)
    except ValueError as e:
        raise InputError(str(e)) from None


def plfunction_json(f: PLFunction) -> dict:
    return {"n": f.n,
            "pieces": [{"c": vec_json(c), "d": rational_text(d)}
                       for c, d in f.pieces],
            "dom": polyhedron_json(f.dom)}


_PARSERS = {
    "polyhedron": parse_polyhedron,
    "mapping": parse_polymap,
    "plfunction": parse_plfunction,
    "matrix": lambda d: _parse_matrix_object(d),
}


def _parse_matrix_object(data) -> Mat:
    if not isinstance(data, dict) or "entries" not in data:
        raise InputError("matrix object needs an 'entries' field")
    return parse_matrix(data["entries"])


def parse_objects(data) -> dict[str, Any]:
    if not isinstance(data, dict):
        raise InputError("'objects' must be a JSON object")
    out: dict[str, Any] = {}
    for name, spec in data.items():
        if not isinstance(spec, dict) or "type" not in spec:
            raise InputError(f"object {name!r} needs a 'type' field")
        t = spec["type"]
        if t not in _PARSERS:
            raise InputError(f"object {name!r} has unknown type {t!r}")
        out[name] = _PARSERS[t](spec)
    return out


def parse_problem_file(text: str) -> tuple[dict[str, Any], list[dict]]:
    """Parse and validate a problem file; returns (objects, tasks)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(data, dict):
        raise InputError("problem file must be a JSON object")
    if data.get("version") != "1":
        raise InputError("problem file version must be the string \"1\"")
    objects = parse_objects(data.get("objects", {}))
    tasks = data.get("tasks", [])
    if not isinstance(tasks, list) or not all(isinstance(t, dict) for t in tasks):
        raise InputError("'tasks' must be an array of objects")
    for i, t in enumerate(tasks):
        if "op" not in t:
            raise InputError(f"task {i} is missing 'op'")
    return objects, tasks


# ----- report rendering --------------------------------------------------------

def extreal_json(x: ExtReal) -> str:
    return x.text()


def support_eval_json(ev: SupportEval) -> dict:
    out: dict[str, Any] = {"value": extreal_json(ev.value)}
    if ev.multipliers is not None:
        out["multipliers"] = vec_json(ev.multipliers)
    if ev.maximizer is not None:
        out["maximizer"] = vec_json(ev.maximizer)
    if ev.unbounded_ray is not None:
        out["unbounded_ray"] = vec_json(ev.unbounded_ray)
    return out


def qualification_json(q: Qualification) -> dict:
    return {"ri_condition": q.ri_condition,
            "polyhedral_condition": q.polyhedral_condition}


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, tuple) and w and isinstance(w[0], Fraction):
        return vec_json(w)
    return [_witness_json(x) for x in w]


def rule_report_json(rep: RuleReport) -> dict:
    return {
        "lhs": extreal_json(rep.lhs),
        "rhs": extreal_json(rep.rhs),
        "equal": rep.equal,
        "witness": _witness_json(rep.witness),
        "qualification": qualification_json(rep.qualification),
        "applicable": rep.applicable,
        "passed": (not rep.applicable) or rep.equal,
    }


def render_report(report: dict) -> str:
    """Stable textual form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
