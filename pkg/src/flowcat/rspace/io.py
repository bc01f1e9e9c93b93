"""JSON and OFF input for vertex-valued complexes."""

from __future__ import annotations

import math

from ..core import PreconditionError
from ..fincat.serialize import SchemaError
from .spaces import PLSpace


def _vertex(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SchemaError(path, "vertex ids must be integers or strings")
    return v


def plspace_to_json(X: PLSpace) -> dict:
    maximal = [s for s in X.complex if not any(set(s) < set(t) for t in X.complex)]
    return {
        "vertices": list(X.vertices),
        "simplices": [list(s) for s in maximal],
        "values": {str(v): X.values[v] for v in X.vertices},
    }


def plspace_from_json(d, path: str = "$") -> PLSpace:
    """``{vertices, simplices, values}``; faces of listed simplices are implied."""
    if not isinstance(d, dict):
        raise SchemaError(path, "expected an object")
    for key in ("vertices", "simplices", "values"):
        if key not in d:
            raise SchemaError(f"{path}.{key}", "missing")
    if not isinstance(d["vertices"], list):
        raise SchemaError(f"{path}.vertices", "expected a list")
    verts = [_vertex(v, f"{path}.vertices[{i}]") for i, v in enumerate(d["vertices"])]
    by_name = {str(v): v for v in verts}
    if len(by_name) != len(verts):
        raise SchemaError(f"{path}.vertices", "duplicate vertex ids")
    if not isinstance(d["simplices"], list):
        raise SchemaError(f"{path}.simplices", "expected a list of vertex lists")
    simplices = [[v] for v in verts]
    for i, s in enumerate(d["simplices"]):
        if not isinstance(s, list) or not s:
            raise SchemaError(f"{path}.simplices[{i}]", "expected a nonempty list of vertex ids")
        for j, v in enumerate(s):
            if str(v) not in by_name:
                raise SchemaError(f"{path}.simplices[{i}][{j}]", f"unknown vertex {v!r}")
        simplices.append([by_name[str(v)] for v in s])
    vals = d["values"]
    if not isinstance(vals, dict):
        raise SchemaError(f"{path}.values", "expected an object keyed by vertex id")
    values = {}
    for v in verts:
        x = vals.get(str(v))
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
            raise SchemaError(f"{path}.values.{v}", "expected a finite number")
        values[v] = float(x)
    try:
        return PLSpace.from_simplices(simplices, values)
    except PreconditionError as exc:
        raise SchemaError(path, str(exc)) from None


def plspace_from_off(text: str) -> PLSpace:
    """Triangle mesh in OFF layout with one extra scalar column per vertex.

    Each vertex line is ``x y z value`` (coordinates are ignored; a line with
    only three numbers takes ``z`` as the value). Faces are ``n i_1 ... i_n``.
    """
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise SchemaError("off:1", "empty file")
    first = lines[0].split()
    if first[0].upper().endswith("OFF"):
        if len(first) > 1:
            head, body = first[1:], lines[1:]
        elif len(lines) > 1:
            head, body = lines[1].split(), lines[2:]
        else:
            raise SchemaError("off:header", "missing counts line")
    else:
        head, body = first, lines[1:]
    try:
        nv, nf = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise SchemaError("off:header", "expected vertex and face counts") from None
    if len(body) < nv + nf:
        raise SchemaError("off:body", f"expected {nv} vertex and {nf} face lines")
    values = {}
    for i in range(nv):
        parts = body[i].split()
        try:
            nums = [float(x) for x in parts]
        except ValueError:
            raise SchemaError(f"off:vertex[{i}]", "non-numeric entry") from None
        if len(nums) < 3:
            raise SchemaError(f"off:vertex[{i}]", "expected at least three numbers")
        values[i] = nums[3] if len(nums) >= 4 else nums[2]
    simplices = [[i] for i in range(nv)]
    for j in range(nf):
        parts = body[nv + j].split()
        try:
            k = int(parts[0])
            ids = [int(x) for x in parts[1:1 + k]]
        except (ValueError, IndexError):
            raise SchemaError(f"off:face[{j}]", "bad face line") from None
        if len(ids) != k or any(not 0 <= v < nv for v in ids):
            raise SchemaError(f"off:face[{j}]", "face references unknown vertices")
        if k == 3:
            simplices.append(ids)
        else:
            # Fan-triangulate polygons from their first vertex.
            simplices += [[ids[0], ids[t], ids[t + 1]] for t in range(1, k - 1)]
    return PLSpace.from_simplices(simplices, values)
