"""JSON reading and writing of triangulations with vertex coordinates.

Format::

    {"n": 1,
     "vertices": [{"id": 1, "coordinate": [["0"]], "inner": false}, ...],
     "tetrahedra": [{"id": 1, "vertices": [1, 2, 3, 4], "orientation": 1}, ...]}

``orientation`` is relative to the listed vertex order; on reading, vertex
lists are sorted and the sign adjusted. An optional ``face_copies`` list
(four integers, faces in lexicographic order of the sorted vertices) keeps
pillow faces apart. The ``inner`` flags are checked against the complex.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .coords import CoordinateAssignment
from .grassmann import permutation_sign
from .matrix import ExactMatrix
from .scalar import format_scalar, parse_scalar
from .triangulation import Tetra, Triangulation, TriangulationError

__all__ = ["FormatError", "Loaded", "dump_triangulation", "load_triangulation", "parse_triangulation"]


class FormatError(ValueError):
    """Input is not valid JSON or does not follow the triangulation format."""


@dataclass(frozen=True)
class Loaded:
    triangulation: Triangulation
    n: int
    coordinates: CoordinateAssignment | None


def _matrix(value, n: int, vid) -> ExactMatrix:
    if isinstance(value, (str, int)):
        value = [[value]]
    try:
        rows = [[parse_scalar(str(x)) for x in row] for row in value]
    except (TypeError, ValueError) as exc:
        raise FormatError(f"vertex {vid}: bad coordinate entry ({exc})") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise FormatError(f"vertex {vid}: coordinate must be {n}x{n}")
    return ExactMatrix.from_rows(rows)


def parse_triangulation(data: dict) -> Loaded:
    if not isinstance(data, dict):
        raise FormatError("top level must be an object")
    try:
        n = int(data.get("n", 1))
        tets_in = data["tetrahedra"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"missing or bad field: {exc}") from None
    if n < 1:
        raise FormatError("n must be at least 1")
    tets = []
    for k, item in enumerate(tets_in):
        try:
            vs = [int(v) for v in item["vertices"]]
            orient = int(item.get("orientation", 1))
            tid = int(item.get("id", k + 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"tetrahedron #{k}: {exc}") from None
        if len(vs) != 4 or len(set(vs)) != 4:
            raise FormatError(f"tetrahedron {tid}: need four distinct vertices")
        if orient not in (1, -1):
            raise FormatError(f"tetrahedron {tid}: orientation must be 1 or -1")
        copies = tuple(int(c) for c in item.get("face_copies", (0, 0, 0, 0)))
        if len(copies) != 4:
            raise FormatError(f"tetrahedron {tid}: face_copies needs four entries")
        tets.append(Tetra(tid, tuple(sorted(vs)), orient * permutation_sign(vs), copies))
    t = Triangulation(tuple(tets))

    coords = {}
    flags = {}
    for item in data.get("vertices", []):
        try:
            vid = int(item["id"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"vertex entry without id: {exc}") from None
        if "coordinate" in item and item["coordinate"] is not None:
            coords[vid] = _matrix(item["coordinate"], n, vid)
        if "inner" in item:
            flags[vid] = bool(item["inner"])
    inner = set(t.inner_vertices)
    for vid, flag in flags.items():
        if vid not in t.vertices:
            raise FormatError(f"vertex {vid} is not used by any tetrahedron")
        if flag != (vid in inner):
            raise TriangulationError(
                f"vertex {vid} is marked inner={flag} but is {'inner' if vid in inner else 'on the boundary'}"
            )
    zeta = None
    if coords:
        missing = [v for v in t.vertices if v not in coords]
        if missing:
            raise FormatError(f"coordinates missing for vertices {missing}")
        zeta = CoordinateAssignment(n, coords)
    return Loaded(t, n, zeta)


def load_triangulation(path: str | Path) -> Loaded:
    text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from None
    return parse_triangulation(data)


def dump_triangulation(t: Triangulation, zeta: CoordinateAssignment | None = None, n: int | None = None) -> dict:
    n = zeta.n if zeta is not None else (n or 1)
    inner = set(t.inner_vertices)
    verts = []
    for v in t.vertices:
        entry = {"id": v, "inner": v in inner}
        if zeta is not None and v in zeta:
            entry["coordinate"] = zeta[v].to_json()
        verts.append(entry)
    tets = []
    for x in t.ordered:
        entry = {"id": x.id, "vertices": list(x.vertices), "orientation": x.orientation}
        if any(x.face_copies):
            entry["face_copies"] = list(x.face_copies)
        tets.append(entry)
    return {"n": n, "vertices": verts, "tetrahedra": tets}


def format_json(obj) -> str:
    return json.dumps(obj, indent=2, default=_default)


def _default(x):
    try:
        return format_scalar(x)
    except TypeError:
        raise TypeError(f"not serialisable: {type(x).__name__}") from None
