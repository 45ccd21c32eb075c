"""JSON file formats for point sets, polytopes and constants.

Rationals are written as strings ("p/q" or "p"); output is canonical
(sorted points, sorted keys) so identical values serialize to identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .bodies import ConstantsConfig
from .errors import InputError
from .lattice import IntegerPointSet
from .polytope import RationalPolytope


def _frac(s: Any, where: str) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (int, str)):
        raise InputError(f"{where}: expected an integer or a 'p/q' string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{where}: cannot parse {s!r} as a rational") from None


def _dim(obj: dict) -> int:
    n = obj.get("dim")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"'dim' must be a positive integer, got {n!r}")
    return n


# ---------------------------------------------------------------- point sets


def point_set_from_json(obj: dict) -> IntegerPointSet:
    if not isinstance(obj, dict) or "points" not in obj:
        raise InputError("a point set needs the keys 'dim' and 'points'")
    n = _dim(obj)
    pts = obj["points"]
    if not isinstance(pts, list):
        raise InputError("'points' must be a list")
    for i, p in enumerate(pts):
        if not isinstance(p, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in p):
            raise InputError(f"point {i} is not a list of integers: {p!r}")
    return IntegerPointSet.from_points(n, pts)


def point_set_to_json(A: IntegerPointSet) -> dict:
    return {"dim": A.dim, "points": [list(p) for p in A.sorted_points()]}


# ---------------------------------------------------------------- polytopes


def polytope_from_json(obj: dict) -> RationalPolytope:
    """Parse a polytope; supplied facets are audited against the vertices."""
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise InputError("a polytope needs the keys 'dim' and 'vertices'")
    n = _dim(obj)
    verts = []
    for i, v in enumerate(obj["vertices"]):
        if not isinstance(v, list) or len(v) != n:
            raise InputError(f"vertex {i} must be a list of {n} rationals")
        verts.append(tuple(_frac(c, f"vertex {i}") for c in v))
    K = RationalPolytope(n, verts)
    if "facets" in obj:
        given = set()
        for j, f in enumerate(obj["facets"]):
            try:
                a = tuple(_frac(c, f"facet {j}") for c in f["normal"])
                b = _frac(f["offset"], f"facet {j}")
            except (KeyError, TypeError):
                raise InputError(f"facet {j} needs 'normal' and 'offset'") from None
            if len(a) != n:
                raise InputError(f"facet {j} normal has length {len(a)}, expected {n}")
            if any(sum(x * y for x, y in zip(a, v)) > b for v in K.vertices):
                raise InputError(f"facet {j} is violated by a vertex")
            if not any(sum(x * y for x, y in zip(a, v)) == b for v in K.vertices):
                raise InputError(f"facet {j} does not support the polytope")
            given.add(_normalize(a, b))
        derived = {_normalize(a, b) for a, b in K.inequalities()}
        if not given >= {d for d in derived if d[0] is not None}:
            raise InputError("supplied facets do not cut out the hull of the vertices")
    return K


def _normalize(a, b):
    """Scale a halfspace so it can be compared with another description of it."""
    s = next((abs(Fraction(c)) for c in a if c != 0), None)
    if s is None:
        return (None, None)
    return (tuple(Fraction(c) / s for c in a), Fraction(b) / s)


def polytope_to_json(K: RationalPolytope, with_facets: bool = False) -> dict:
    out: dict = {"dim": K.dim, "vertices": [[str(c) for c in v] for v in sorted(K.vertices)]}
    if with_facets and not K.is_empty:
        out["facets"] = [{"normal": [str(c) for c in a], "offset": str(b)} for a, b in K.inequalities()]
    return out


# ---------------------------------------------------------------- dispatch


def load_instance(obj: dict):
    """A point set if the object has 'points', a polytope if it has 'vertices'."""
    if isinstance(obj, dict) and "points" in obj:
        return point_set_from_json(obj)
    if isinstance(obj, dict) and "vertices" in obj:
        return polytope_from_json(obj)
    raise InputError("instance file must contain 'points' or 'vertices'")


def instance_to_json(x) -> dict:
    if isinstance(x, IntegerPointSet):
        return point_set_to_json(x)
    if isinstance(x, RationalPolytope):
        return polytope_to_json(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def read_instance(path):
    return load_instance(read_json(path))


def write_instance(path, x) -> None:
    Path(path).write_text(dumps(instance_to_json(x)))


def read_config(path) -> ConstantsConfig:
    obj = read_json(path)
    if not isinstance(obj, dict):
        raise InputError("config file must hold a JSON object")
    return ConstantsConfig.from_dict(obj)
