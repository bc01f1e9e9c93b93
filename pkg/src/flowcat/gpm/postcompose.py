"""Postcomposition of grid diagrams with a fiberwise functor.

A diagram over ``{0..m}`` valued in finite sets (or in finite complexes) is
turned into a grid module by applying a functor to every fiber and every
structure map. Because the functor commutes with reindexing, it carries
interleavings to interleavings with the identity as comparison map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..core import INF, PreconditionError, SizeError, size_cap
from ..fincat.category import CompositionError, LazyFunctor, LazyNatTrans
from ..fincat.colax import ColaxFunctor
from . import f2
from .category import ModuleCategory, precomposition_flow
from .modules import GridModule, ModuleMap, shift_index


class ConfigurationError(ValueError):
    """The requested fiber functor is not one of the shipped ones."""


# -- set-valued diagrams ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SetDiagram:
    """``sizes[i]`` is ``|X(i)|`` with elements ``0..size-1``; ``maps[i]`` is ``X(i -> i+1)``."""

    m: int
    sizes: tuple
    maps: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) != self.m + 1 or any(s < 0 for s in sizes):
            raise PreconditionError(f"need m + 1 = {self.m + 1} nonnegative sizes")
        if len(self.maps) != self.m:
            raise PreconditionError(f"need {self.m} structure maps")
        maps = []
        for i, f in enumerate(self.maps):
            f = tuple(int(x) for x in f)
            if len(f) != sizes[i] or any(not 0 <= x < sizes[i + 1] for x in f):
                raise PreconditionError(f"map {i} is not a function {sizes[i]} -> {sizes[i + 1]}")
            maps.append(f)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "maps", tuple(maps))

    def map(self, i: int, j: int) -> tuple:
        f = tuple(range(self.sizes[i]))
        for t in range(i, j):
            f = tuple(self.maps[t][x] for x in f)
        return f

    def __eq__(self, other):
        if not isinstance(other, SetDiagram):
            return NotImplemented
        return (self.m, self.sizes, self.maps) == (other.m, other.sizes, other.maps)

    def __hash__(self):
        return hash((self.m, self.sizes, self.maps))


def shift_set(X: SetDiagram, k: int) -> SetDiagram:
    m = X.m
    sizes = tuple(X.sizes[shift_index(i, k, m)] for i in range(m + 1))
    maps = tuple(
        X.maps[i + k] if i + k < m else tuple(range(sizes[i])) for i in range(m)
    )
    return SetDiagram(m, sizes, maps)


@dataclass(frozen=True)
class SetMap:
    source: SetDiagram
    target: SetDiagram
    components: tuple

    def is_natural(self) -> bool:
        X, Y, c = self.source, self.target, self.components
        return all(
            tuple(Y.maps[i][c[i][x]] for x in range(X.sizes[i]))
            == tuple(c[i + 1][X.maps[i][x]] for x in range(X.sizes[i]))
            for i in range(X.m)
        )

    def after(self, other: "SetMap") -> "SetMap":
        """``self o other``."""
        return SetMap(
            other.source, self.target,
            tuple(tuple(a[x] for x in b) for a, b in zip(self.components, other.components)),
        )


def canonical_set_map(X: SetDiagram, k: int) -> SetMap:
    m = X.m
    return SetMap(X, shift_set(X, k), tuple(X.map(i, shift_index(i, k, m)) for i in range(m + 1)))


def shift_set_map(phi: SetMap, k: int) -> SetMap:
    m = phi.source.m
    return SetMap(
        shift_set(phi.source, k), shift_set(phi.target, k),
        tuple(phi.components[shift_index(i, k, m)] for i in range(m + 1)),
    )


def set_maps(X: SetDiagram, Y: SetDiagram, cap: int | None = None) -> list:
    """All natural maps ``X -> Y`` in lexicographic order of their components.

    Naturality fixes the next component on the image of each structure map,
    so only elements outside that image are free.
    """
    if X.m != Y.m:
        raise PreconditionError("diagrams over different grids")
    cap = size_cap(2 ** 16) if cap is None else cap
    m = X.m
    out: list = []

    def extend(i: int, comps: list) -> None:
        if len(out) > cap:
            raise SizeError(f"more than {cap} natural maps", cap)
        if i > m:
            out.append(SetMap(X, Y, tuple(comps)))
            return
        forced: dict = {}
        if i > 0:
            prev = comps[-1]
            for x in range(X.sizes[i - 1]):
                y, want = X.maps[i - 1][x], Y.maps[i - 1][prev[x]]
                if forced.setdefault(y, want) != want:
                    return
        free = [x for x in range(X.sizes[i]) if x not in forced]
        if free and not Y.sizes[i]:
            return
        for choice in itertools.product(range(Y.sizes[i]), repeat=len(free)):
            c = dict(forced)
            c.update(zip(free, choice))
            comps.append(tuple(c[x] for x in range(X.sizes[i])))
            extend(i + 1, comps)
            comps.pop()

    extend(0, [])
    return out


def check_set_interleaving(X: SetDiagram, Y: SetDiagram, k: int, phi: SetMap, psi: SetMap) -> bool:
    if not (phi.is_natural() and psi.is_natural()):
        return False
    left = shift_set_map(psi, k).after(phi)
    right = shift_set_map(phi, k).after(psi)
    return (
        left.components == canonical_set_map(X, 2 * k).components
        and right.components == canonical_set_map(Y, 2 * k).components
    )


def find_set_interleaving(X: SetDiagram, Y: SetDiagram, k: int):
    """Exhaustive search over both map sets; the first passing pair in lexicographic order."""
    phis = set_maps(X, shift_set(Y, k))
    psis = set_maps(Y, shift_set(X, k))
    for phi in phis:
        for psi in psis:
            if check_set_interleaving(X, Y, k, phi, psi):
                return phi, psi
    return None


def set_distance(X: SetDiagram, Y: SetDiagram) -> float:
    # Shifts saturate at m, so k = m is the last index that can make a difference.
    for k in range(X.m + 1):
        if find_set_interleaving(X, Y, k) is not None:
            return float(k)
    return INF


def random_set_diagram(rng: np.random.Generator, m: int, max_size: int = 2) -> SetDiagram:
    sizes = [int(s) for s in rng.integers(0, max_size + 1, size=m + 1)]
    maps = []
    for i in range(m):
        if sizes[i] and not sizes[i + 1]:
            sizes[i + 1] = 1
        maps.append(tuple(int(x) for x in rng.integers(0, max(sizes[i + 1], 1), size=sizes[i])))
    return SetDiagram(m, tuple(sizes), tuple(maps))


# -- complex-valued diagrams --------------------------------------------------


@dataclass(frozen=True, eq=False)
class ComplexDiagram:
    """Finite complexes ``complexes[i]`` with simplicial vertex maps ``maps[i]`` to the next one."""

    m: int
    complexes: tuple
    maps: tuple

    def __post_init__(self):
        from ..rspace.homology import closure, is_closed, simplex

        if len(self.complexes) != self.m + 1 or len(self.maps) != self.m:
            raise PreconditionError("need m + 1 complexes and m maps")
        Ks = []
        for K in self.complexes:
            K = [simplex(s) for s in K]
            if not is_closed(K):
                raise PreconditionError("complex is not closed under faces")
            Ks.append(closure(K))
        for i, f in enumerate(self.maps):
            target = set(Ks[i + 1])
            for s in Ks[i]:
                if simplex(f[v] for v in s) not in target:
                    raise PreconditionError(f"map {i} does not send {s} to a simplex")
        object.__setattr__(self, "complexes", tuple(Ks))
        object.__setattr__(self, "maps", tuple(dict(f) for f in self.maps))


# -- fiber functors -------------------------------------------------------------


_KINDS = ("identity", "free", "homology")


def _parse(H) -> tuple[str, int]:
    if isinstance(H, str):
        kind, p = H, 0
    elif isinstance(H, tuple) and len(H) == 2:
        kind, p = H
    else:
        raise ConfigurationError(f"cannot read a fiber functor from {H!r}")
    if kind not in _KINDS:
        raise ConfigurationError(f"unsupported fiber functor {kind!r}; expected one of {_KINDS}")
    if kind == "homology" and (not isinstance(p, int) or p < 0):
        raise ConfigurationError("homology needs a nonnegative degree")
    return kind, p


def free_module(X: SetDiagram) -> GridModule:
    steps = []
    for i, f in enumerate(X.maps):
        M = f2.zeros(X.sizes[i + 1], X.sizes[i])
        for x, y in enumerate(f):
            M[y, x] = 1
        steps.append(M)
    return GridModule(X.m, X.sizes, tuple(steps))


def free_map(phi: SetMap, source: GridModule | None = None, target: GridModule | None = None) -> ModuleMap:
    X, Y = phi.source, phi.target
    comps = []
    for i, c in enumerate(phi.components):
        M = f2.zeros(Y.sizes[i], X.sizes[i])
        for x, y in enumerate(c):
            M[y, x] = 1
        comps.append(M)
    return ModuleMap(source or free_module(X), target or free_module(Y), tuple(comps))


def homology_of_diagram(D: ComplexDiagram, p: int) -> GridModule:
    from ..rspace.homology import homology_basis, induced_map

    bases = [homology_basis(K, p) for K in D.complexes]
    steps = tuple(
        induced_map(bases[i], bases[i + 1], D.maps[i], D.complexes[i + 1]) for i in range(D.m)
    )
    return GridModule(D.m, tuple(b.dim for b in bases), steps)


def postcompose(H, F) -> GridModule:
    """Apply the fiber functor ``H`` pointwise to the diagram ``F``.

    ``H`` is ``"identity"`` (on grid modules), ``"free"`` (F2-span of a set
    diagram) or ``("homology", p)`` (degree ``p`` homology of a complex
    diagram).
    """
    kind, p = _parse(H)
    if kind == "identity":
        if not isinstance(F, GridModule):
            raise ConfigurationError("the identity fiber functor acts on grid modules")
        return F
    if kind == "free":
        if not isinstance(F, SetDiagram):
            raise ConfigurationError("the free fiber functor acts on set diagrams")
        return free_module(F)
    if not isinstance(F, ComplexDiagram):
        raise ConfigurationError("the homology fiber functor acts on complex diagrams")
    return homology_of_diagram(F, p)


# -- materialised postcomposition as a colax functor ------------------------------


class SetDiagramCategory:
    """Set diagrams and their saturated shifts, with all natural maps; mirrors :class:`ModuleCategory`."""

    def __init__(self, diagrams: Mapping[str, SetDiagram], hom_cap: int | None = None):
        ms = {X.m for X in diagrams.values()}
        if len(ms) != 1:
            raise PreconditionError("all diagrams must live on the same grid")
        self.m = ms.pop()
        self.diagrams = dict(diagrams)
        self.objects = tuple((name, s) for name in self.diagrams for s in range(self.m + 1))
        self.hom_cap = hom_cap if hom_cap is not None else size_cap(2 ** 12)
        self._homs: dict = {}

    def diagram(self, a) -> SetDiagram:
        name, s = a
        return shift_set(self.diagrams[name], s)

    def hom(self, a, b) -> tuple:
        if (a, b) not in self._homs:
            maps = set_maps(self.diagram(a), self.diagram(b), cap=self.hom_cap)
            self._homs[(a, b)] = tuple(sorted((a, b, phi.components) for phi in maps))
        return self._homs[(a, b)]

    def dom(self, f):
        return f[0]

    def cod(self, f):
        return f[1]

    def identity(self, a):
        X = self.diagram(a)
        return (a, a, tuple(tuple(range(n)) for n in X.sizes))

    def compose(self, g, f):
        if f[1] != g[0]:
            raise CompositionError(f"cannot compose {g[0]}->{g[1]} after {f[0]}->{f[1]}")
        return (f[0], g[1], tuple(tuple(gc[x] for x in fc) for gc, fc in zip(g[2], f[2])))

    def shift_object(self, a, k: int):
        name, s = a
        return (name, min(s + k, self.m))

    def shift_morphism(self, f, k: int):
        a, b, comps = f
        m = self.m
        return (
            self.shift_object(a, k), self.shift_object(b, k),
            tuple(comps[shift_index(i, k, m)] for i in range(m + 1)),
        )

    def canonical(self, a, j: int, k: int):
        src, tgt = self.shift_object(a, j), self.shift_object(a, k)
        phi = canonical_set_map(self.diagram(src), k - j)
        return (src, tgt, phi.components)


def free_postcomposition(diagrams: Mapping[str, SetDiagram], n: int | None = None) -> ColaxFunctor:
    """The free fiber functor as a colax functor between the two precomposition flows.

    Objects keep their labels; ``eta`` is the identity because freeing commutes
    with reindexing along the shift.
    """
    C = SetDiagramCategory(diagrams)
    D = ModuleCategory({name: free_module(X) for name, X in diagrams.items()})
    src, tgt = precomposition_flow(C, n), precomposition_flow(D, n)

    def on_mor(f):
        a, b, comps = f
        phi = SetMap(C.diagram(a), C.diagram(b), comps)
        return D.encode(a, b, free_map(phi, D.module(a), D.module(b)))

    H = LazyFunctor(C, D, lambda a: a, on_mor)
    eta = [
        LazyNatTrans(None, None, lambda a, k=k: D.identity(D.shift_object(a, k)))
        for k in range(src.n + 1)
    ]
    return ColaxFunctor(src, tgt, H, eta)
