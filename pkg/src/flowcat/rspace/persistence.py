"""Lower-star sublevel filtrations, their persistence modules, and soft stability.

Two independent routes produce barcodes: the module route builds homology
bases at every step and decomposes the resulting grid module, while the
reduction route runs the standard column reduction on the filtered boundary
matrix. Tests compare the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..core import INF, TOL, PreconditionError
from ..gpm.barcode import Barcode, bottleneck_match
from ..gpm.modules import GridModule, ModuleMap
from .homology import _key, homology_basis, induced_map, simplex
from .spaces import PLSpace, dinf_witness


@dataclass(frozen=True, eq=False)
class Filtration:
    """``complexes[i]`` is the sublevel complex at ``values[i]``; all nested."""

    values: tuple
    complexes: tuple

    def __post_init__(self):
        if len(self.values) != len(self.complexes):
            raise PreconditionError("one complex per critical value")
        if any(a >= b for a, b in zip(self.values, self.values[1:])):
            raise PreconditionError("critical values must be strictly increasing")
        for i, (A, B) in enumerate(zip(self.complexes, self.complexes[1:])):
            if not set(A) <= set(B):
                raise PreconditionError(f"step {i} is not contained in step {i + 1}")

    @property
    def m(self) -> int:
        return len(self.values) - 1

    def index_of(self, t: float) -> int:
        for i, v in enumerate(self.values):
            if abs(v - t) <= TOL:
                return i
        raise PreconditionError(f"{t} is not a critical value")


def sublevel_filtration(X: PLSpace) -> Filtration:
    """Critical values are the distinct vertex values; ties share one step."""
    ts = sorted(set(X.values.values()))
    if not ts:
        raise PreconditionError("the empty complex has no filtration")
    complexes = tuple(tuple(s for s in X.complex if X.value(s) <= t) for t in ts)
    return Filtration(tuple(ts), complexes)


def persistence_module(F: Filtration, p: int) -> GridModule:
    """``i -> H_p(K_i; F2)`` with the maps induced by inclusion."""
    if p < 0:
        raise PreconditionError("homology degree must be nonnegative")
    bases = [homology_basis(K, p) for K in F.complexes]
    steps = []
    for i in range(F.m):
        ident = {s[0]: s[0] for s in F.complexes[i] if len(s) == 1}
        steps.append(induced_map(bases[i], bases[i + 1], ident, F.complexes[i + 1]))
    return GridModule(F.m, tuple(b.dim for b in bases), tuple(steps))


def induced_module_map(
    X: PLSpace, Y: PLSpace, vmap: Mapping, p: int
) -> ModuleMap:
    """Map of sublevel persistence modules from a value-preserving simplicial map.

    ``vmap`` must send simplices to simplices and satisfy ``g(vmap v) <= f(v)``
    so that every sublevel set of ``X`` lands in the matching sublevel set of
    ``Y``. Both filtrations are indexed by the union of critical values.
    """
    ts = sorted(set(X.values.values()) | set(Y.values.values()))
    FX = Filtration(tuple(ts), tuple(tuple(s for s in X.complex if X.value(s) <= t) for t in ts))
    FY = Filtration(tuple(ts), tuple(tuple(s for s in Y.complex if Y.value(s) <= t) for t in ts))
    for v in X.vertices:
        if Y.values[vmap[v]] > X.values[v] + TOL:
            raise PreconditionError(f"vertex {v!r} is not sent into the sublevel set")
    MX, MY = persistence_module(FX, p), persistence_module(FY, p)
    comps = []
    for KX, KY in zip(FX.complexes, FY.complexes):
        comps.append(induced_map(homology_basis(KX, p), homology_basis(KY, p), vmap, KY))
    return ModuleMap(MX, MY, tuple(comps))


@dataclass(frozen=True)
class PersistenceBarcodes:
    """Real-valued bars keyed by homology degree, alongside grid-index bars."""

    real: Mapping[int, Barcode]
    grid: Mapping[int, Barcode]
    values: tuple


def _filtered_order(X: PLSpace) -> list:
    return sorted(X.complex, key=lambda s: (X.value(s), len(s), [_key(v) for v in s]))


def reduce_boundary(X: PLSpace) -> list:
    """Persistence pairs ``(birth simplex, death simplex or None)`` by column reduction.

    Columns are Python integers used as F2 bitsets over the filtration order.
    """
    order = _filtered_order(X)
    index = {s: i for i, s in enumerate(order)}
    low_owner: dict[int, int] = {}
    columns: list[int] = []
    for j, s in enumerate(order):
        col = 0
        if len(s) > 1:
            for r in range(len(s)):
                col |= 1 << index[s[:r] + s[r + 1:]]
        while col:
            low = col.bit_length() - 1
            other = low_owner.get(low)
            if other is None:
                low_owner[low] = j
                break
            col ^= columns[other]
        columns.append(col)
    pairs = []
    killed = set()
    for low, j in sorted(low_owner.items()):
        pairs.append((order[low], order[j]))
        killed.add(low)
        killed.add(j)
    for i, s in enumerate(order):
        if i not in killed:
            pairs.append((s, None))
    return pairs


def persistence_barcodes(X: PLSpace, max_degree: int | None = None) -> PersistenceBarcodes:
    F = sublevel_filtration(X)
    top = max(len(s) for s in X.complex) - 1
    degrees = range((top if max_degree is None else max_degree) + 1)
    real = {p: [] for p in degrees}
    grid = {p: [] for p in degrees}
    for birth, death in reduce_boundary(X):
        p = len(birth) - 1
        if p not in real:
            continue
        b = X.value(birth)
        d = INF if death is None else X.value(death)
        if d - b <= TOL:
            continue  # zero-length bars are dropped
        real[p].append((b, d))
        grid[p].append((F.index_of(b), F.m + 1 if death is None else F.index_of(d)))
    return PersistenceBarcodes(
        {p: Barcode(tuple(v)) for p, v in real.items()},
        {p: Barcode(tuple(v), end=F.m + 1) for p, v in grid.items()},
        F.values,
    )


def persistence_barcode(X: PLSpace, p: int, grid: bool = False) -> Barcode:
    if p < 0:
        raise PreconditionError("homology degree must be nonnegative")
    bcs = persistence_barcodes(X, max_degree=p)
    return (bcs.grid if grid else bcs.real)[p]


@dataclass
class StabilityReport:
    p: int
    bottleneck: float
    dinf: float
    matching: tuple
    isomorphism: dict | None
    ok: bool

    def as_dict(self) -> dict:
        from ..core import format_ext

        return {
            "p": self.p,
            "bottleneck": format_ext(self.bottleneck),
            "dinf": format_ext(self.dinf),
            "ok": self.ok,
            "matching": [list(pair) for pair in self.matching],
            "isomorphism": None if self.isomorphism is None else {str(k): v for k, v in self.isomorphism.items()},
        }


def stability_check(X: PLSpace, Y: PLSpace, p: int, cap: int | None = None) -> StabilityReport:
    """``bottleneck(barcode_p X, barcode_p Y) <= dinf(X, Y)`` with both witnesses."""
    bx, by = persistence_barcode(X, p), persistence_barcode(Y, p)
    match = bottleneck_match(bx, by)
    iso = dinf_witness(X, Y, cap=32 if cap is None else cap)
    ok = match.value <= iso.value + 1e-9
    return StabilityReport(p, match.value, iso.value, match.matching, iso.isomorphism, ok)


def random_complex(rng: np.random.Generator, n_vertices: int, edge_p: float = 0.4, tri_p: float = 0.5) -> tuple:
    """A random flag-like complex: random edges, then triangles on some 3-cliques."""
    simplices = [(v,) for v in range(n_vertices)]
    edges = set()
    for a in range(n_vertices):
        for b in range(a + 1, n_vertices):
            if rng.random() < edge_p:
                edges.add((a, b))
    simplices += sorted(edges)
    for a in range(n_vertices):
        for b in range(a + 1, n_vertices):
            for c in range(b + 1, n_vertices):
                if {(a, b), (a, c), (b, c)} <= edges and rng.random() < tri_p:
                    simplices.append((a, b, c))
    return tuple(simplex(s) for s in simplices)


def random_plspace(rng: np.random.Generator, n_vertices: int, **kw) -> PLSpace:
    K = random_complex(rng, n_vertices, **kw)
    values = {v: float(np.round(rng.uniform(0, 10), 3)) for v in range(n_vertices)}
    return PLSpace(K, values)


def perturb(rng: np.random.Generator, X: PLSpace, eta: float) -> PLSpace:
    return X.with_values({v: x + float(rng.uniform(-eta, eta)) for v, x in X.values.items()})
