"""Finite simplicial complexes with vertex values in the reals or a finite metric space.

Homeomorphisms of the continuous setting are replaced by simplicial
isomorphisms, and a function is its vertex values extended to simplices by
the maximum. ``dinf`` is the least sup-norm discrepancy over isomorphisms.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping

from ..core import INF, TOL, PreconditionError, SizeError, size_cap
from ..posetflow import FiniteMetricSpace
from .homology import _key, closure, is_closed, simplex


def _complex(simplices) -> tuple:
    simplices = [simplex(s) for s in simplices]
    if not is_closed(simplices):
        raise PreconditionError("complex is not closed under faces")
    return closure(simplices)


@dataclass(frozen=True, eq=False)
class PLSpace:
    """A complex with a real value on every vertex."""

    complex: tuple
    values: Mapping[Hashable, float]

    def __post_init__(self):
        K = _complex(self.complex)
        verts = [s[0] for s in K if len(s) == 1]
        missing = [v for v in verts if v not in self.values]
        if missing:
            raise PreconditionError(f"no value for vertices {missing}")
        vals = {v: float(self.values[v]) for v in verts}
        if not all(math.isfinite(x) for x in vals.values()):
            raise PreconditionError("vertex values must be finite")
        object.__setattr__(self, "complex", K)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_simplices(cls, simplices, values) -> "PLSpace":
        """Accepts maximal simplices only; faces are added."""
        return cls(closure(simplices), values)

    @property
    def vertices(self) -> tuple:
        return tuple(s[0] for s in self.complex if len(s) == 1)

    def value(self, s) -> float:
        """Max-extension of the vertex values."""
        return max(self.values[v] for v in s)

    def with_values(self, values) -> "PLSpace":
        return PLSpace(self.complex, values)


@dataclass(frozen=True, eq=False)
class MSpacePL:
    """A complex with a point of ``metric`` on every vertex."""

    complex: tuple
    values: Mapping[Hashable, Hashable]
    metric: FiniteMetricSpace

    def __post_init__(self):
        K = _complex(self.complex)
        verts = [s[0] for s in K if len(s) == 1]
        missing = [v for v in verts if v not in self.values]
        if missing:
            raise PreconditionError(f"no value for vertices {missing}")
        for v in verts:
            self.metric.index(self.values[v])
        object.__setattr__(self, "complex", K)
        object.__setattr__(self, "values", {v: self.values[v] for v in verts})

    @property
    def vertices(self) -> tuple:
        return tuple(s[0] for s in self.complex if len(s) == 1)


@dataclass
class IsoResult:
    value: float
    isomorphism: dict | None
    explored: int = 0


def _profile(K, v) -> tuple:
    # Count of simplices of each dimension containing v; preserved by isomorphisms.
    c = Counter(len(s) for s in K if v in s)
    return tuple(sorted(c.items()))


def best_isomorphism(
    K: tuple, L: tuple, cost: Callable[[Hashable, Hashable], float], cap: int | None = None
) -> IsoResult:
    """Branch and bound over vertex bijections of ``K`` onto ``L`` that are simplicial.

    Minimises ``max_v cost(v, phi(v))``. A bijection of vertices that sends
    simplices to simplices is an isomorphism once the simplex counts agree in
    every dimension, so only the forward direction is checked.
    """
    cap = size_cap(12) if cap is None else cap
    VK = [s[0] for s in K if len(s) == 1]
    VL = [s[0] for s in L if len(s) == 1]
    if max(len(VK), len(VL)) > cap:
        raise SizeError(f"isomorphism search over {max(len(VK), len(VL))} vertices exceeds the cap of {cap}", cap)
    if Counter(map(len, K)) != Counter(map(len, L)):
        return IsoResult(INF, None)
    colour_K = {v: _profile(K, v) for v in VK}
    colour_L = {w: _profile(L, w) for w in VL}
    if Counter(colour_K.values()) != Counter(colour_L.values()):
        return IsoResult(INF, None)
    if not VK:
        return IsoResult(0.0, {})

    # Assign in breadth-first order from the most constrained colour class.
    neighbours = {v: set() for v in VK}
    for s in K:
        if len(s) == 2:
            a, b = s
            neighbours[a].add(b)
            neighbours[b].add(a)
    class_size = Counter(colour_K.values())
    order: list = []
    seen: set = set()
    for start in sorted(VK, key=lambda v: (class_size[colour_K[v]], -len(neighbours[v]), _key(v))):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(neighbours[v] - seen, key=lambda w: (class_size[colour_K[w]], _key(w))):
                seen.add(w)
                queue.append(w)
    position = {v: i for i, v in enumerate(order)}
    closing: dict = {v: [] for v in order}
    for s in K:
        if len(s) > 1:
            closing[max(s, key=position.__getitem__)].append(s)
    Lset = set(L)
    candidates = {
        v: sorted((w for w in VL if colour_L[w] == colour_K[v]), key=lambda w: (cost(v, w), _key(w)))
        for v in VK
    }

    best = [INF, None]
    phi: dict = {}
    used: set = set()
    count = [0]

    def extend(i: int, worst: float) -> None:
        if i == len(order):
            if worst < best[0]:
                best[0], best[1] = worst, dict(phi)
            return
        v = order[i]
        for w in candidates[v]:
            c = cost(v, w)
            if c >= best[0]:
                break  # candidates are sorted by cost
            if w in used:
                continue
            phi[v] = w
            count[0] += 1
            if all(simplex(phi[x] for x in s) in Lset for s in closing[v]):
                used.add(w)
                extend(i + 1, max(worst, c))
                used.discard(w)
            del phi[v]

    extend(0, 0.0)
    return IsoResult(best[0], best[1], count[0])


def dinf_witness(X: PLSpace, Y: PLSpace, cap: int | None = None) -> IsoResult:
    f, g = X.values, Y.values
    return best_isomorphism(X.complex, Y.complex, lambda v, w: abs(f[v] - g[w]), cap)


def dinf(X: PLSpace, Y: PLSpace, cap: int | None = None) -> float:
    """``min`` over simplicial isomorphisms of ``max_v |f(v) - g(phi v)|``; ``inf`` if none."""
    return dinf_witness(X, Y, cap).value


def dinf_m_witness(X: MSpacePL, Y: MSpacePL, cap: int | None = None) -> IsoResult:
    if X.metric is not Y.metric and (
        X.metric.points != Y.metric.points or (X.metric.dist != Y.metric.dist).any()
    ):
        raise PreconditionError("both spaces must map into the same metric space")
    M, f, g = X.metric, X.values, Y.values
    return best_isomorphism(X.complex, Y.complex, lambda v, w: M.d(f[v], g[w]), cap)


def dinf_m(X: MSpacePL, Y: MSpacePL, cap: int | None = None) -> float:
    return dinf_m_witness(X, Y, cap).value


def real_line_space(values) -> FiniteMetricSpace:
    """The given reals as a finite subspace of the line; points are the numbers themselves."""
    pts = tuple(sorted({float(v) for v in values}))
    return FiniteMetricSpace(pts, [[abs(a - b) for b in pts] for a in pts])


def as_mspace(X: PLSpace, metric: FiniteMetricSpace | None = None) -> MSpacePL:
    metric = metric or real_line_space(X.values.values())
    return MSpacePL(X.complex, dict(X.values), metric)


def _grid_key(x: float) -> float:
    return round(x, 9)


def verify_flow_iso(X: MSpacePL, eps: float, forward=None, inverse=None) -> bool:
    """Check the two slice translations agree on a real grid.

    ``Q`` holds the pairs ``(x, m)`` with ``m`` a grid point within ``eps`` of
    ``f(x)``, valued by ``m``. ``P`` holds ``(x, t)`` with ``|t| <= eps`` and
    ``f(x) + t`` on the grid, valued by ``f(x) + t``. The maps
    ``(x, m) -> (x, m - f(x))`` and ``(x, t) -> (x, t + f(x))`` must be mutually
    inverse bijections ``Q <-> P`` preserving values. Alternative maps may be
    passed to test that a wrong inverse is caught.
    """
    if eps < 0:
        raise PreconditionError("eps must be nonnegative")
    grid = X.metric.points
    if not all(isinstance(p, (int, float)) for p in grid):
        raise PreconditionError("verify_flow_iso needs a metric space of real numbers")
    f = X.values
    forward = forward or (lambda x, m: (x, m - f[x]))
    inverse = inverse or (lambda x, t: (x, t + f[x]))
    Q = {(x, m) for x in X.vertices for m in grid if X.metric.d(f[x], m) <= eps + TOL}
    P = {(x, _grid_key(m - f[x])) for x in X.vertices for m in grid if abs(m - f[x]) <= eps + TOL}
    on_grid = {_grid_key(m) for m in grid}

    image = set()
    for x, m in Q:
        y, t = forward(x, m)
        t = _grid_key(t)
        if y != x or abs(t) > eps + TOL or _grid_key(f[x] + t) != _grid_key(m):
            return False
        back = inverse(y, t)
        if back[0] != x or _grid_key(back[1]) != _grid_key(m):
            return False
        image.add((y, t))
    if image != P:
        return False
    for x, t in P:
        y, m = inverse(x, t)
        if y != x or _grid_key(m) not in on_grid:
            return False
        fx, ft = forward(y, m)
        if fx != x or _grid_key(ft) != t:
            return False
    return True
