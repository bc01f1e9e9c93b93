"""Random verified flows, random colax functors, and single-cell mutations.

All generators take a ``numpy.random.Generator`` so callers control seeding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from ..core import EpsilonGrid
from .category import FinCat, Functor, NatTrans
from .colax import ColaxFunctor
from .flow import GridFlow
from .instances import FlowSpec, _mor, parse_morphism, poset_closure

#: Group orders allowed by the default cap of 8 morphisms per hom-set.
GROUP_ORDERS = (1, 2, 3, 4, 5, 6, 8)


def random_poset(rng: np.random.Generator, size: int, density: float = 0.4):
    elements = tuple(f"x{i}" for i in range(size))
    rel = [
        (elements[i], elements[j])
        for i in range(size)
        for j in range(i + 1, size)
        if rng.random() < density
    ]
    return elements, poset_closure(elements, rel)


def _up(leq, x):
    return sorted(b for a, b in leq if a == x)


def monotone_maps(src_elems, src_leq, tgt_elems, tgt_leq, allowed=None):
    """All order-preserving maps, optionally restricted per element to ``allowed[x]``."""
    choices = [allowed[x] if allowed else list(tgt_elems) for x in src_elems]
    for values in itertools.product(*choices):
        m = dict(zip(src_elems, values))
        if all((m[a], m[b]) in tgt_leq for a, b in src_leq):
            yield m


def random_inflation(rng, elements, leq):
    """A random monotone map ``s`` with ``x <= s(x)``."""
    allowed = {x: _up(leq, x) for x in elements}
    maps = list(monotone_maps(elements, leq, elements, leq, allowed))
    return maps[rng.integers(len(maps))]


def _iterate(s, times, elements):
    m = {x: x for x in elements}
    for _ in range(times):
        m = {x: s[m[x]] for x in elements}
    return m


def random_superadditive(rng, n: int) -> list[int]:
    """A nondecreasing ``f`` with ``f(0) = 0`` and ``f(j) + f(k) <= f(j + k)``."""
    kind = rng.integers(4)
    if kind == 0:
        return [k for k in range(n + 1)]
    if kind == 1:
        r = int(rng.integers(2, 4))
        return [k // r for k in range(n + 1)]
    if kind == 2:
        return [max(0, k - 1) for k in range(n + 1)]
    return [2 * k for k in range(n + 1)]


def random_flow_spec(
    rng: np.random.Generator,
    max_objects: int = 5,
    n: int = 6,
    max_hom: int = 8,
    delta: float = 1.0,
) -> FlowSpec:
    """A random twisted poset-group flow; always satisfies every flow law."""
    size = int(rng.integers(1, max_objects + 1))
    elements, leq = random_poset(rng, size)
    s = random_inflation(rng, elements, leq)
    f = random_superadditive(rng, n)
    omegas = [_iterate(s, f[k], elements) for k in range(n + 1)]
    # Occasionally close up at level 0 with a second inflation when it stays superlinear.
    if rng.random() < 0.3:
        c0 = random_inflation(rng, elements, leq)
        closed = [{x: c0[om[x]] for x in elements} for om in omegas]
        cand = FlowSpec(elements, leq, tuple(closed), EpsilonGrid(delta, n))
        if cand.is_superlinear():
            omegas = closed
    orders = [g for g in GROUP_ORDERS if g <= max_hom]
    order = int(orders[rng.integers(len(orders))])
    c = tuple(int(v) for v in rng.integers(0, order, size=n + 1))
    gamma = int(rng.integers(order))
    return FlowSpec(elements, leq, tuple(omegas), EpsilonGrid(delta, n), order, c, gamma)


def random_flow(rng: np.random.Generator, **kw) -> GridFlow:
    return random_flow_spec(rng, **kw).build()


@dataclass(frozen=True)
class ColaxSpec:
    """A colax functor between two :class:`FlowSpec` flows.

    ``mapping`` is a monotone map of posets with ``m(Omega_k x) <= Omega'_k(m x)``;
    ``multiplier`` defines the group homomorphism ``g -> multiplier * g``.
    """

    source: FlowSpec
    target: FlowSpec
    mapping: dict
    multiplier: int

    def eta_twist(self, k: int) -> int:
        s, t, r = self.source, self.target, self.multiplier
        return (t.cochain(k) - r * s.cochain(k) + r * s.gamma - t.gamma) % t.order

    def build(self, source: GridFlow | None = None, target: GridFlow | None = None) -> ColaxFunctor:
        src = source or self.source.build()
        tgt = target or self.target.build()
        m, r = self.mapping, self.multiplier
        to = self.target.order
        mor = {}
        for f in src.base.morphisms:
            a, b, g = parse_morphism(f)
            mor[f] = _mor(m[a], m[b], r * g, to)
        H = Functor(src.base, tgt.base, dict(m), mor)
        eta = []
        for k in range(src.n + 1):
            om, om2, tw = self.source.omegas[k], self.target.omegas[k], self.eta_twist(k)
            eta.append(
                NatTrans(None, None, {a: _mor(m[om[a]], om2[m[a]], tw, to) for a in self.source.elements})
            )
        return ColaxFunctor(src, tgt, H, eta)


def lax_maps(source: FlowSpec, target: FlowSpec):
    """Every monotone map admitting a comparison ``m Omega_k <= Omega'_k m``."""
    n = source.grid.n
    for m in monotone_maps(source.elements, source.leq, target.elements, target.leq):
        if all(
            (m[source.omegas[k][x]], target.omegas[k][m[x]]) in target.leq
            for k in range(n + 1)
            for x in source.elements
        ):
            yield m


def homomorphisms(order: int, target_order: int) -> list[int]:
    """Multipliers ``r`` for which ``g -> r * g`` is a homomorphism ``Z/order -> Z/target_order``."""
    return [r for r in range(target_order) if (order * r) % target_order == 0]


def random_colax_spec(rng, source: FlowSpec, target: FlowSpec) -> ColaxSpec:
    maps = list(lax_maps(source, target))
    # Constant maps always qualify, so the list is never empty.
    m = maps[rng.integers(len(maps))]
    homs = homomorphisms(source.order, target.order)
    r = int(homs[rng.integers(len(homs))])
    return ColaxSpec(source, target, m, r)


def random_colax(rng, **kw) -> ColaxSpec:
    """A random colax functor between two fresh random flows on the same grid."""
    return random_colax_spec(rng, random_flow_spec(rng, **kw), random_flow_spec(rng, **kw))


def random_composable(rng, **kw) -> tuple[ColaxSpec, ColaxSpec]:
    a, b, c = (random_flow_spec(rng, **kw) for _ in range(3))
    return random_colax_spec(rng, a, b), random_colax_spec(rng, b, c)


# -- mutations ------------------------------------------------------------


def flow_cells(flow: GridFlow):
    """Every single table cell of a tabulated flow, as ``(table, key)`` addresses."""
    C = flow.base
    for key in C.table:
        yield ("compose", key)
    for k, T in enumerate(flow.T):
        for a in T.obj:
            yield ("T.obj", k, a)
        for f in T.mor:
            yield ("T.mor", k, f)
    for a in flow.u.components:
        yield ("u", a)
    for jk, m in flow.mu.items():
        for a in m.components:
            yield ("mu", jk, a)
    for jk, m in flow.monotone.items():
        for a in m.components:
            yield ("monotone", jk, a)


def _cell_value(flow: GridFlow, cell):
    kind = cell[0]
    if kind == "compose":
        return flow.base.table[cell[1]]
    if kind == "T.obj":
        return flow.T[cell[1]].obj[cell[2]]
    if kind == "T.mor":
        return flow.T[cell[1]].mor[cell[2]]
    if kind == "u":
        return flow.u.components[cell[1]]
    return getattr(flow, kind)[cell[1]].components[cell[2]]


def set_cell(flow: GridFlow, cell, value) -> GridFlow:
    """A copy of ``flow`` with one table cell overwritten."""
    kind = cell[0]
    C = flow.base
    if kind == "compose":
        table = dict(C.table)
        table[cell[1]] = value
        base = FinCat(C.objects, C.morphisms, C.identities, table)
        return _rebase(flow, base)
    if kind in ("T.obj", "T.mor"):
        k = cell[1]
        T = list(flow.T)
        obj, mor = dict(T[k].obj), dict(T[k].mor)
        (obj if kind == "T.obj" else mor)[cell[2]] = value
        T[k] = Functor(T[k].source, T[k].target, obj, mor)
        return replace(flow, T=tuple(T))
    if kind == "u":
        comps = dict(flow.u.components)
        comps[cell[1]] = value
        return replace(flow, u=NatTrans(flow.u.source, flow.u.target, comps))
    table = dict(getattr(flow, kind))
    old = table[cell[1]]
    comps = dict(old.components)
    comps[cell[2]] = value
    table[cell[1]] = NatTrans(old.source, old.target, comps)
    return replace(flow, **{kind: table})


def _rebase(flow: GridFlow, base: FinCat) -> GridFlow:
    """Swap the base category everywhere it is referenced."""

    def fun(F):
        return Functor(base, base, F.obj, F.mor)

    def nat(a):
        return NatTrans(
            fun(a.source) if a.source is not None else None,
            fun(a.target) if a.target is not None else None,
            a.components,
        )

    return GridFlow(
        base,
        flow.grid,
        tuple(fun(T) for T in flow.T),
        {k: nat(v) for k, v in flow.monotone.items()},
        nat(flow.u),
        {k: nat(v) for k, v in flow.mu.items()},
    )


def mutate_flow(rng: np.random.Generator, flow: GridFlow, cell=None):
    """Overwrite one randomly chosen cell with a different value.

    Returns ``(mutated_flow, cell, old_value, new_value)``. Object cells get a
    different object; morphism cells get a different morphism id.
    """
    C = flow.base

    def alternatives(c):
        old = _cell_value(flow, c)
        pool = list(C.objects) if c[0] == "T.obj" else sorted(C.morphisms)
        return old, [x for x in pool if x != old]

    if cell is None:
        cells = [c for c in flow_cells(flow) if alternatives(c)[1]]
        if not cells:
            raise ValueError("flow has a single object and morphism; nothing to mutate")
        cell = cells[rng.integers(len(cells))]
    old, pool = alternatives(cell)
    if not pool:
        raise ValueError(f"cell {cell} has no alternative value")
    new = pool[rng.integers(len(pool))]
    return set_cell(flow, cell, new), cell, old, new
