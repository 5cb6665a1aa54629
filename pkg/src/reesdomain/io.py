"""JSON file formats and the bundled fixtures.

Group file:      {"order": n, "table": [[...]], "names": [...]}
                 or {"generators": [[one-line permutation], ...]}
Rees file:       {"group": <group file name/path or inline object>,
                  "matrix": [[entry names]], "lambda": k, "i": m}
Cayley table:    {"order": n, "table": [[...]], "names": [...]}
Point set:       [[element name, ...], ...]
System:          {"num_vars": n, "equations": [{"lhs": text, "rhs": text}],
                  "shared": [text, ...]}   # "shared" optional, referenced as @k

Every loader also accepts a CLI report whose "result" holds the artifact.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path
from typing import Any

from .equations import Equation, EquationSystem
from .errors import InputFormatError
from .groups import FiniteGroup, group_from_permutations, validate_group
from .points import PointSet
from .semigroups import FiniteSemigroup, ReesSemigroup, SandwichMatrix, StarSemigroup
from .terms import parse_term, render_shared

__all__ = [
    "FIXTURES",
    "fixture_path",
    "read_json",
    "load_group",
    "load_structure",
    "load_points",
    "dump_points",
    "load_system",
    "dump_system",
    "file_digest",
]

FIXTURES = (
    "z2", "s3", "a5", "s8", "s8_singular", "s240", "mod4mul", "a5_group_case", "a5_singular",
    "zero3", "z3add", "semilattice3", "z2_with_zero", "size_clause1", "size_clause2",
    "size_clause3", "size_clause4", "size_clause5",
)


def fixture_path(name: str) -> Path:
    stem = name[:-5] if name.endswith(".json") else name
    return Path(str(resources.files("reesdomain") / "data" / f"{stem}.json"))


def _resolve(ref: str | Path, relative_to: Path | None = None) -> Path:
    p = Path(ref)
    if p.is_file():
        return p
    if relative_to is not None and (relative_to / p).is_file():
        return relative_to / p
    bundled = fixture_path(str(ref))
    if bundled.is_file():
        return bundled
    raise InputFormatError(f"no such file or bundled fixture: {ref}")


def file_digest(ref: str | Path) -> str:
    return hashlib.sha256(_resolve(ref).read_bytes()).hexdigest()


def read_json(ref: str | Path, relative_to: Path | None = None) -> tuple[Any, Path]:
    path = _resolve(ref, relative_to)
    try:
        return json.loads(path.read_text()), path
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON ({exc})") from None


def _unwrap(obj: Any, key: str) -> Any:
    if isinstance(obj, dict) and "result" in obj and isinstance(obj["result"], dict):
        inner = obj["result"]
        if key in inner:
            return inner[key]
    return obj


def group_from_object(obj: dict) -> FiniteGroup:
    if not isinstance(obj, dict):
        raise InputFormatError("group must be a JSON object")
    if "generators" in obj:
        return group_from_permutations(obj["generators"])
    if "table" not in obj:
        raise InputFormatError("group object needs 'table' or 'generators'")
    table = obj["table"]
    if "order" in obj and len(table) != obj["order"]:
        raise InputFormatError("'order' does not match the table size")
    return validate_group(table, obj.get("names"), reindex=True)


def load_group(ref) -> FiniteGroup:
    if isinstance(ref, dict):
        return group_from_object(ref)
    obj, _ = read_json(ref)
    return group_from_object(obj)


def structure_from_object(obj: dict, base_dir: Path | None = None):
    if not isinstance(obj, dict):
        raise InputFormatError("semigroup file must be a JSON object")
    if "matrix" in obj:
        g = obj.get("group")
        if isinstance(g, str):
            gobj, _ = read_json(g, base_dir)
            group = group_from_object(gobj)
        else:
            group = group_from_object(g)
        names = obj["matrix"]
        try:
            rows = [[group.index(str(v)) for v in row] for row in names]
        except InputFormatError:
            raise
        matrix = SandwichMatrix.from_rows(rows, group)
        if obj.get("lambda", matrix.cols) != matrix.cols or obj.get("i", matrix.rows) != matrix.rows:
            raise InputFormatError("'lambda'/'i' do not match the matrix shape")
        S = ReesSemigroup(group, matrix)
        return StarSemigroup(S) if obj.get("star") else S
    if "table" in obj:
        if "order" in obj and len(obj["table"]) != obj["order"]:
            raise InputFormatError("'order' does not match the table size")
        return FiniteSemigroup.from_table(obj["table"], obj.get("names"))
    raise InputFormatError("semigroup file needs 'matrix' or 'table'")


def load_structure(ref):
    """Load a Rees semigroup (or its star monoid when ``"star": true``) or a Cayley table."""
    if isinstance(ref, dict):
        return structure_from_object(ref)
    obj, path = read_json(ref)
    return structure_from_object(obj, path.parent)


def _element(S, name) -> int:
    if isinstance(S, FiniteSemigroup):
        return S.index(str(name))
    return S.parse_element(str(name))


def points_from_object(obj, S, arity: int | None = None) -> PointSet:
    obj = _unwrap(obj, "points")
    if not isinstance(obj, list):
        raise InputFormatError("point set must be a JSON array")
    pts = []
    for p in obj:
        if isinstance(p, str):
            p = [p]
        if not isinstance(p, list):
            raise InputFormatError("each point must be an array of element names")
        pts.append(tuple(_element(S, v) for v in p))
    return PointSet.from_points(pts, S.order, arity)


def load_points(ref, S, arity: int | None = None) -> PointSet:
    if isinstance(ref, (list, dict)):
        return points_from_object(ref, S, arity)
    obj, _ = read_json(ref)
    return points_from_object(obj, S, arity)


def dump_points(points: PointSet, S) -> list[list[str]]:
    return [[S.name(v) for v in p] for p in points]


def system_from_object(obj, S) -> EquationSystem:
    obj = _unwrap(obj, "system")
    if not isinstance(obj, dict) or "num_vars" not in obj or "equations" not in obj:
        raise InputFormatError("system must have 'num_vars' and 'equations'")
    n = int(obj["num_vars"])
    shared = []
    for text in obj.get("shared", []):
        shared.append(parse_term(text, n, S, shared))
    eqs = []
    for e in obj["equations"]:
        eqs.append(Equation(parse_term(e["lhs"], n, S, shared), parse_term(e["rhs"], n, S, shared)))
    return EquationSystem(n, tuple(eqs))


def load_system(ref, S) -> EquationSystem:
    if isinstance(ref, dict):
        return system_from_object(ref, S)
    obj, _ = read_json(ref)
    return system_from_object(obj, S)


def dump_system(system: EquationSystem, S) -> dict:
    roots = [t for eq in system.equations for t in (eq.lhs, eq.rhs)]
    shared, texts = render_shared(roots, S)
    out: dict[str, Any] = {"num_vars": system.num_vars}
    if shared:
        out["shared"] = shared
    out["equations"] = [{"lhs": texts[2 * k], "rhs": texts[2 * k + 1]} for k in range(len(system))]
    return out
