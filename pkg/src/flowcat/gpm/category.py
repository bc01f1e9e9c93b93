"""Grid modules and their shifts as a (lazily enumerated) finite category with a flow.

Objects are labels ``(name, s)`` standing for ``modules[name] Omega_s`` with
``0 <= s <= m``; shifts beyond ``m`` coincide with ``Omega_m``. Morphisms are
all natural maps between the underlying modules, encoded compactly as
``(source, target, rows)`` where ``rows[i]`` lists the rows of the component
at index ``i`` as bitmasks. The flow is precomposition with the saturated
shift, which is strict: ``u`` and ``mu`` are identities.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from ..core import EpsilonGrid, PreconditionError, SizeError, size_cap
from ..fincat.category import CompositionError, LazyFunctor, LazyNatTrans
from ..fincat.flow import GridFlow, find_weak_interleaving, is_weak_interleaving
from .modules import (
    GridModule,
    ModuleMap,
    canonical_map,
    find_omega_interleaving,
    hom_space,
    random_module,
    shift_index,
    shift_module,
)


def _rows(M: np.ndarray) -> tuple:
    return tuple(int(sum(int(v) << c for c, v in enumerate(row))) for row in M)


def _compose_rows(g: tuple, f: tuple) -> tuple:
    """Rows of ``g @ f``: row ``r`` is the XOR of the rows of ``f`` selected by ``g[r]``."""
    n = len(f)
    if n <= 3:
        # Small spans dominate; tabulate every XOR combination of f's rows.
        if n == 0:
            return (0,) * len(g)
        if n == 1:
            tab = (0, f[0])
        elif n == 2:
            f0, f1 = f
            tab = (0, f0, f1, f0 ^ f1)
        else:
            f0, f1, f2_ = f
            f01 = f0 ^ f1
            tab = (0, f0, f1, f01, f2_, f0 ^ f2_, f1 ^ f2_, f01 ^ f2_)
        return tuple([tab[r] for r in g])
    out = []
    for gr in g:
        acc, s = 0, 0
        while gr:
            if gr & 1:
                acc ^= f[s]
            gr >>= 1
            s += 1
        out.append(acc)
    return tuple(out)


class ModuleCategory:
    """The full subcategory on the given modules and all their shifts."""

    def __init__(self, modules: Mapping[str, GridModule], hom_cap: int | None = None):
        ms = {F.m for F in modules.values()}
        if len(ms) != 1:
            raise PreconditionError("all modules must live on the same grid")
        self.m = ms.pop()
        self.modules = dict(modules)
        self.objects = tuple((name, s) for name in self.modules for s in range(self.m + 1))
        self.hom_cap = hom_cap if hom_cap is not None else size_cap(2 ** 12)
        self._homs: dict = {}
        self._shifted: dict = {}

    def module(self, a) -> GridModule:
        if a not in self._shifted:
            name, s = a
            self._shifted[a] = shift_module(self.modules[name], s)
        return self._shifted[a]

    def encode(self, a, b, phi: ModuleMap):
        return (a, b, tuple(_rows(c) for c in phi.components))

    def decode(self, f) -> ModuleMap:
        a, b, rows = f
        F, G = self.module(a), self.module(b)
        comps = []
        for i, rs in enumerate(rows):
            M = np.zeros((G.dims[i], F.dims[i]), dtype=np.uint8)
            for r, bits in enumerate(rs):
                for c in range(F.dims[i]):
                    M[r, c] = bits >> c & 1
            comps.append(M)
        return ModuleMap(F, G, tuple(comps))

    def hom(self, a, b) -> tuple:
        key = (a, b)
        if key not in self._homs:
            H = hom_space(self.module(a), self.module(b))
            if 2 ** H.dim > self.hom_cap:
                raise SizeError(f"hom-set of size 2^{H.dim} exceeds the cap of {self.hom_cap}", self.hom_cap)
            self._homs[key] = tuple(sorted(self.encode(a, b, phi) for phi in H.elements()))
        return self._homs[key]

    def dom(self, f):
        return f[0]

    def cod(self, f):
        return f[1]

    def identity(self, a):
        F = self.module(a)
        return (a, a, tuple(tuple(1 << r for r in range(d)) for d in F.dims))

    def compose(self, g, f):
        if f[1] != g[0]:
            raise CompositionError(f"cannot compose {g[0]}->{g[1]} after {f[0]}->{f[1]}")
        return (f[0], g[1], tuple(map(_compose_rows, g[2], f[2])))

    def shift_object(self, a, k: int):
        name, s = a
        return (name, min(s + k, self.m))

    def shift_morphism(self, f, k: int):
        a, b, rows = f
        m = self.m
        return (
            self.shift_object(a, k),
            self.shift_object(b, k),
            tuple(rows[shift_index(i, k, m)] for i in range(m + 1)),
        )

    def canonical(self, a, j: int, k: int):
        """``monotone(j <= k)`` at ``a``: the structure maps ``T_j a -> T_k a``."""
        src, tgt = self.shift_object(a, j), self.shift_object(a, k)
        Y = self.module(src)
        phi = canonical_map(Y, k - j)
        return self.encode(src, tgt, phi)


def precomposition_flow(cat, n: int | None = None) -> GridFlow:
    """The precomposition flow over the grid ``0..n`` (default ``2m``).

    ``cat`` provides ``m``, ``identity``, ``shift_object``, ``shift_morphism``
    and ``canonical`` as :class:`ModuleCategory` does.
    """
    n = 2 * cat.m if n is None else n
    grid = EpsilonGrid(1.0, max(n, 1))
    T = tuple(
        LazyFunctor(cat, cat, lambda a, k=k: cat.shift_object(a, k), lambda f, k=k: cat.shift_morphism(f, k))
        for k in range(grid.n + 1)
    )
    ident = LazyNatTrans(None, None, cat.identity)
    mu = {
        (j, k): LazyNatTrans(None, None, lambda a, j=j, k=k: cat.identity(cat.shift_object(a, j + k)))
        for j in range(grid.n + 1)
        for k in range(grid.n + 1 - j)
    }
    mono = {
        (j, k): LazyNatTrans(None, None, lambda a, j=j, k=k: cat.canonical(a, j, k))
        for j in range(grid.n + 1)
        for k in range(j, grid.n + 1)
    }
    return GridFlow(cat, grid, T, mono, ident, mu)


def module_flow(cat: ModuleCategory, n: int | None = None) -> GridFlow:
    return precomposition_flow(cat, n)


def weak_vs_omega(F: GridModule, G: GridModule, k: int, flow: GridFlow | None = None) -> dict:
    """Decide Omega-interleaving and weak interleaving at ``k`` by independent routes.

    The Omega side solves the triangles with linear algebra on the modules;
    the weak side runs the generic exhaustive pentagon search on the
    materialised category. Any Omega witness is also re-checked as a weak
    interleaving, which is the implication the comparison is about.
    """
    if flow is None:
        flow = module_flow(ModuleCategory({"F": F, "G": G}))
    cat = flow.base
    a, b = ("F", 0), ("G", 0)
    omega = find_omega_interleaving(F, G, k)
    weak = find_weak_interleaving(flow, a, b, k)
    witness_ok = None
    if omega is not None:
        phi, psi = omega
        witness_ok = is_weak_interleaving(
            flow, a, b, k,
            cat.encode(a, cat.shift_object(b, k), phi),
            cat.encode(b, cat.shift_object(a, k), psi),
        )
    return {
        "k": k,
        "omega": omega is not None,
        "weak": weak is not None,
        "omega_witness_is_weak": witness_ok,
        "implication": omega is None or bool(witness_ok and weak is not None),
        "equivalent": (omega is not None) == (weak is not None),
    }


def draw_comparison_pair(
    rng: np.random.Generator, max_m: int = 4, max_dim: int = 3, max_total: int = 12, max_hom_dim: int = 10
) -> tuple[GridModule, GridModule, int]:
    """A random module pair sized for the exhaustive weak search; returns ``(F, G, rejected)``.

    Pairs with ``F.total_dim + G.total_dim > max_total`` are redrawn. Pairs whose
    map spaces ``F -> G Omega_k`` or ``G -> F Omega_k`` exceed dimension
    ``max_hom_dim`` at some ``k`` are also redrawn and counted in ``rejected``.
    """
    rejected = 0
    while True:
        m = int(rng.integers(1, max_m + 1))
        while True:
            F, G = random_module(rng, m, max_dim), random_module(rng, m, max_dim)
            if F.total_dim + G.total_dim <= max_total:
                break
        worst = max(
            hom_space(X, shift_module(Y, k)).dim for k in range(m + 1) for X, Y in ((F, G), (G, F))
        )
        if worst <= max_hom_dim:
            return F, G, rejected
        rejected += 1
