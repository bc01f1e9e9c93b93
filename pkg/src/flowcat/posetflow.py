"""Closed-form interleaving distances on posets with a superlinear family of translations.

On a poset every diagram commutes, so ``a`` and ``b`` are interleaved at
``eps`` exactly when ``a <= Omega_eps(b)`` and ``b <= Omega_eps(a)``. The
functions here use that shortcut directly; :func:`materialize_poset_flow`
builds the same flows as explicit finite categories so the general search can
be cross-checked against these formulas.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

import numpy as np

from .core import INF, TOL, EpsilonGrid, PreconditionError, SizeError, size_cap
from .fincat.flow import GridFlow
from .fincat.instances import FlowSpec


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Points with a symmetric distance matrix; metric axioms are checked on construction."""

    points: tuple
    dist: np.ndarray

    def __post_init__(self):
        pts = tuple(self.points)
        d = np.asarray(self.dist, dtype=float)
        n = len(pts)
        if len(set(pts)) != n:
            raise PreconditionError("point ids must be distinct")
        if d.shape != (n, n):
            raise PreconditionError(f"distance matrix must be {n}x{n}, got {d.shape}")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise PreconditionError("distances must be finite and nonnegative")
        if np.any(np.abs(np.diag(d)) > TOL) or np.any(np.abs(d - d.T) > TOL):
            raise PreconditionError("distance matrix must be symmetric with zero diagonal")
        # d[i, k] <= d[i, j] + d[j, k] for all triples
        if n and np.any(d[:, None, :] > d[:, :, None] + d[None, :, :] + TOL):
            raise PreconditionError("triangle inequality fails")
        d.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(pts)})

    def index(self, p) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise PreconditionError(f"unknown point {p!r}") from None

    def d(self, p, q) -> float:
        return float(self.dist[self.index(p), self.index(q)])

    @classmethod
    def from_coordinates(cls, coords, ids=None) -> "FiniteMetricSpace":
        """Euclidean distances between rows of ``coords``."""
        x = np.asarray(coords, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=-1))
        ids = tuple(ids) if ids is not None else tuple(f"p{i}" for i in range(len(x)))
        return cls(ids, d)

    @property
    def diameter(self) -> float:
        return float(self.dist.max()) if len(self.points) else 0.0


def _as_points(X) -> np.ndarray:
    x = np.asarray(X, dtype=float)
    return x[:, None] if x.ndim == 1 else x


def hausdorff(A, B, metric: FiniteMetricSpace | None = None) -> float:
    """Hausdorff distance between nonempty finite sets.

    With ``metric`` given, ``A`` and ``B`` are point ids of that space;
    otherwise they are coordinate arrays in Euclidean space.
    """
    if len(A) == 0 or len(B) == 0:
        raise PreconditionError("Hausdorff distance needs nonempty subsets")
    if metric is not None:
        ia = [metric.index(p) for p in A]
        ib = [metric.index(p) for p in B]
        D = metric.dist[np.ix_(ia, ib)]
    else:
        a, b = _as_points(A), _as_points(B)
        if a.shape[1] != b.shape[1]:
            raise PreconditionError("point sets live in different dimensions")
        D = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=-1))
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def linf(a: Sequence[float], b: Sequence[float]) -> float:
    """``max_i |a_i - b_i|``."""
    x, y = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise PreconditionError(f"vectors must share one dimension >= 1, got {x.shape} and {y.shape}")
    return float(np.max(np.abs(x - y)))


def thicken(U, eps: float, space: FiniteMetricSpace) -> frozenset:
    """Closed thickening ``{m : d(m, u) <= eps for some u in U}``."""
    if eps < 0:
        raise PreconditionError("thickening radius must be nonnegative")
    idx = [space.index(u) for u in U]
    if not idx:
        return frozenset()
    near = (space.dist[idx, :] <= eps + TOL).any(axis=0)
    return frozenset(p for p, hit in zip(space.points, near) if hit)


def poset_interleaving(
    leq: Callable[[Hashable, Hashable], bool],
    omega: Callable[[float, Hashable], Hashable],
    a,
    b,
    grid: EpsilonGrid,
) -> float:
    """Least grid value ``eps`` with ``a <= omega(eps, b)`` and ``b <= omega(eps, a)``.

    The predicate is monotone in ``eps`` for a superlinear family, so the grid
    is bisected instead of scanned; the endpoints are checked first. The whole
    grid ``0..n`` is available here because no pentagon needs ``2 eps``.
    """

    def ok(k: int) -> bool:
        e = grid.value(k)
        return leq(a, omega(e, b)) and leq(b, omega(e, a))

    if ok(0):
        return 0.0
    if not ok(grid.n):
        return INF
    lo, hi = 0, grid.n  # ok(lo) false, ok(hi) true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return grid.value(hi)


def vector_leq(x, y, tol: float = TOL) -> bool:
    return bool(np.all(np.asarray(x) <= np.asarray(y) + tol))


def vector_shift(eps: float, x):
    return np.asarray(x, dtype=float) + eps


def linf_by_interleaving(a, b, grid: EpsilonGrid) -> float:
    """L-infinity distance read off the shift flow on ``R^n`` at grid resolution."""
    if len(a) != len(b):
        raise PreconditionError("dimension mismatch")
    return poset_interleaving(vector_leq, vector_shift, a, b, grid)


def subset_name(S, space: FiniteMetricSpace) -> str:
    """Canonical object id of a subset: its points in ambient order."""
    return "{" + ",".join(str(p) for p in space.points if p in S) + "}"


def _subsets(space: FiniteMetricSpace, include_empty: bool):
    pts = space.points
    start = 0 if include_empty else 1
    for r in range(start, len(pts) + 1):
        for combo in itertools.combinations(pts, r):
            yield frozenset(combo)


def materialize_poset_flow(kind: str, instance, grid: EpsilonGrid) -> GridFlow:
    """An explicit finite flow for one of the poset instances.

    ``hausdorff``: nonempty subsets of a :class:`FiniteMetricSpace` under
    inclusion, translated by closed thickening. ``thicken``: the same on all
    subsets, the empty set included. ``shift_rn``: the integer box
    ``{0..L}^dim`` (``instance = (dim, L)``) with coordinates in units of
    ``grid.delta`` and the saturating shift ``x -> min(x + k, L)``.
    """
    cap = size_cap(64)
    if kind in ("hausdorff", "thicken"):
        space = instance
        count = 2 ** len(space.points) - (kind == "hausdorff")
        if count > cap:
            raise SizeError(f"{count} subsets exceed the cap of {cap} objects", cap)
        subsets = list(_subsets(space, kind == "thicken"))
        names = {S: subset_name(S, space) for S in subsets}
        elements = tuple(names[S] for S in subsets)
        leq = frozenset((names[S], names[R]) for S in subsets for R in subsets if S <= R)
        omegas = tuple(
            {names[S]: names[thicken(S, grid.value(k), space)] for S in subsets}
            for k in grid.indices()
        )
        return FlowSpec(elements, leq, omegas, grid).build()
    if kind == "shift_rn":
        dim, L = instance
        count = (L + 1) ** dim
        if count > cap:
            raise SizeError(f"{count} lattice points exceed the cap of {cap} objects", cap)
        pts = list(itertools.product(range(L + 1), repeat=dim))
        name = lambda x: "(" + ",".join(map(str, x)) + ")"
        elements = tuple(name(x) for x in pts)
        leq = frozenset(
            (name(x), name(y)) for x in pts for y in pts if all(p <= q for p, q in zip(x, y))
        )
        omegas = tuple(
            {name(x): name(tuple(min(c + k, L) for c in x)) for x in pts} for k in grid.indices()
        )
        return FlowSpec(elements, leq, omegas, grid).build()
    raise PreconditionError(f"unknown poset flow kind {kind!r}")


def lattice_point(name: str) -> tuple[int, ...]:
    return tuple(int(c) for c in name.strip("()").split(","))


def grid_for_distances(values, delta: float) -> EpsilonGrid:
    """A grid with step ``delta`` whose search range ``n // 2`` covers ``max(values)``."""
    top = max([0.0, *values])
    half = int(math.ceil(top / delta - 1e-9)) + 1
    return EpsilonGrid(delta, 2 * half)
