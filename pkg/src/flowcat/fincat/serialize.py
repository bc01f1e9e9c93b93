"""Lossless JSON encoding of categories, functors, transformations, flows and colax functors.

The layout is documented in ``docs/formats.md``. Loading validates shape and
reports the JSON path of the first problem through :class:`SchemaError`;
it does not check any laws (that is what the checkers are for).
"""

from __future__ import annotations

import json
from typing import Any

from ..core import EpsilonGrid, PreconditionError
from .category import FinCat, Functor, NatTrans, compose_functors, identity_functor
from .colax import ColaxFunctor
from .flow import GridFlow


class SchemaError(ValueError):
    """Input does not match the expected JSON layout; ``path`` locates it."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _pair_key(j: int, k: int) -> str:
    return f"{j},{k}"


def _parse_pair(key: str, path: str) -> tuple[int, int]:
    try:
        j, k = key.split(",")
        return int(j), int(k)
    except ValueError:
        raise SchemaError(path, f"expected an index pair 'j,k', got {key!r}") from None


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise SchemaError(path, message)


def _mapping(d, path: str) -> dict:
    _expect(isinstance(d, dict), path, "expected an object")
    return d


def _strings(xs, path: str) -> list:
    _expect(isinstance(xs, list) and all(isinstance(x, str) for x in xs), path, "expected a list of strings")
    return xs


# -- encoding ---------------------------------------------------------------


def category_to_json(C: FinCat) -> dict:
    compose: dict = {}
    for (g, f), h in sorted(C.table.items()):
        compose.setdefault(g, {})[f] = h
    return {
        "kind": "category",
        "objects": list(C.objects),
        "morphisms": {f: list(C.morphisms[f]) for f in sorted(C.morphisms)},
        "identities": {a: C.identities[a] for a in C.objects},
        "compose": compose,
    }


def functor_to_json(F: Functor) -> dict:
    return {
        "kind": "functor",
        "objects": dict(F.obj),
        "morphisms": {f: F.mor[f] for f in sorted(F.mor)},
    }


def nat_to_json(alpha) -> dict:
    return {"kind": "nattrans", "components": dict(alpha.components)}


def flow_to_json(flow: GridFlow) -> dict:
    return {
        "kind": "flow",
        "grid": {"delta": flow.grid.delta, "n": flow.grid.n},
        "category": category_to_json(flow.base),
        "translations": [functor_to_json(T) for T in flow.T],
        "unit": nat_to_json(flow.u),
        "mu": {_pair_key(*jk): nat_to_json(m) for jk, m in sorted(flow.mu.items())},
        "monotone": {_pair_key(*jk): nat_to_json(m) for jk, m in sorted(flow.monotone.items())},
    }


def colax_to_json(cf: ColaxFunctor) -> dict:
    return {
        "kind": "colax",
        "source": flow_to_json(cf.source),
        "target": flow_to_json(cf.target),
        "functor": functor_to_json(cf.H),
        "eta": [nat_to_json(e) for e in cf.eta],
    }


def to_json(x) -> dict:
    if isinstance(x, FinCat):
        return category_to_json(x)
    if isinstance(x, GridFlow):
        return flow_to_json(x)
    if isinstance(x, ColaxFunctor):
        return colax_to_json(x)
    if isinstance(x, Functor):
        return functor_to_json(x)
    if isinstance(x, NatTrans):
        return nat_to_json(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


# -- decoding ---------------------------------------------------------------


def category_from_json(d, path: str = "$") -> FinCat:
    d = _mapping(d, path)
    objects = _strings(d.get("objects"), f"{path}.objects")
    mors = _mapping(d.get("morphisms"), f"{path}.morphisms")
    morphisms = {}
    for f, ends in mors.items():
        _expect(
            isinstance(ends, list) and len(ends) == 2 and all(isinstance(e, str) for e in ends),
            f"{path}.morphisms.{f}", "expected [dom, cod]",
        )
        morphisms[f] = tuple(ends)
    ids = _mapping(d.get("identities"), f"{path}.identities")
    for a, i in ids.items():
        _expect(isinstance(i, str), f"{path}.identities.{a}", "expected a morphism id")
    table = {}
    for g, row in _mapping(d.get("compose", {}), f"{path}.compose").items():
        for f, h in _mapping(row, f"{path}.compose.{g}").items():
            _expect(isinstance(h, str), f"{path}.compose.{g}.{f}", "expected a morphism id")
            table[(g, f)] = h
    return FinCat(tuple(objects), morphisms, dict(ids), table)


def functor_from_json(d, source, target, path: str = "$") -> Functor:
    d = _mapping(d, path)
    obj = _mapping(d.get("objects"), f"{path}.objects")
    mor = _mapping(d.get("morphisms"), f"{path}.morphisms")
    return Functor(source, target, dict(obj), dict(mor))


def nat_from_json(d, source, target, path: str = "$") -> NatTrans:
    d = _mapping(d, path)
    return NatTrans(source, target, dict(_mapping(d.get("components"), f"{path}.components")))


def grid_from_json(d, path: str) -> EpsilonGrid:
    d = _mapping(d, path)
    delta, n = d.get("delta"), d.get("n")
    _expect(isinstance(delta, (int, float)) and not isinstance(delta, bool), f"{path}.delta", "expected a number")
    _expect(isinstance(n, int) and not isinstance(n, bool), f"{path}.n", "expected an integer")
    try:
        return EpsilonGrid(float(delta), n)
    except PreconditionError as exc:
        raise SchemaError(path, str(exc)) from None


def flow_from_json(d, path: str = "$") -> GridFlow:
    d = _mapping(d, path)
    grid = grid_from_json(d.get("grid"), f"{path}.grid")
    C = category_from_json(d.get("category"), f"{path}.category")
    ts = d.get("translations")
    _expect(isinstance(ts, list), f"{path}.translations", "expected a list")
    T = tuple(functor_from_json(t, C, C, f"{path}.translations[{k}]") for k, t in enumerate(ts))
    _expect(len(T) == grid.n + 1, f"{path}.translations", f"expected {grid.n + 1} translations")
    u = nat_from_json(d.get("unit"), identity_functor(C), T[0], f"{path}.unit")
    mu = {}
    for key, v in _mapping(d.get("mu"), f"{path}.mu").items():
        j, k = _parse_pair(key, f"{path}.mu.{key}")
        _expect(0 <= j and 0 <= k and j + k <= grid.n, f"{path}.mu.{key}", "index pair out of range")
        mu[(j, k)] = nat_from_json(v, None, T[j + k], f"{path}.mu.{key}")
    mono = {}
    for key, v in _mapping(d.get("monotone"), f"{path}.monotone").items():
        j, k = _parse_pair(key, f"{path}.monotone.{key}")
        _expect(0 <= j <= k <= grid.n, f"{path}.monotone.{key}", "index pair out of range")
        mono[(j, k)] = nat_from_json(v, T[j], T[k], f"{path}.monotone.{key}")
    # Attach composite sources once all translations are known.
    mu = {(j, k): NatTrans(_safe_composite(T[j], T[k]), m.target, m.components) for (j, k), m in mu.items()}
    return GridFlow(C, grid, T, mono, u, mu)


def _safe_composite(outer, inner):
    try:
        return compose_functors(outer, inner)
    except KeyError:
        # Malformed translations; check_flow reports them.
        return None


def colax_from_json(d, path: str = "$") -> ColaxFunctor:
    d = _mapping(d, path)
    src = flow_from_json(d.get("source"), f"{path}.source")
    tgt = flow_from_json(d.get("target"), f"{path}.target")
    H = functor_from_json(d.get("functor"), src.base, tgt.base, f"{path}.functor")
    es = d.get("eta")
    _expect(isinstance(es, list), f"{path}.eta", "expected a list")
    eta = [nat_from_json(e, None, None, f"{path}.eta[{k}]") for k, e in enumerate(es)]
    return ColaxFunctor(src, tgt, H, eta)


def from_json(d) -> Any:
    """Decode any document carrying a top-level ``kind``."""
    kind = _mapping(d, "$").get("kind")
    if kind == "category":
        return category_from_json(d)
    if kind == "flow":
        return flow_from_json(d)
    if kind == "colax":
        return colax_from_json(d)
    raise SchemaError("$.kind", f"unsupported kind {kind!r}")


def dumps(x, **kw) -> str:
    return json.dumps(to_json(x), sort_keys=True, **kw)


def loads(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return from_json(d)
