"""Concrete flows used throughout the test-suite and the CLI.

The workhorse is :class:`FlowSpec`: a finite poset ``P`` with a superlinear
family of translations, crossed with the one-object category of a cyclic
group ``Z/order``. Morphisms ``a -> b`` exist iff ``a <= b`` and are labelled
by group elements, so hom-sets have ``order`` elements. The coherence data are
twisted by a 1-cochain ``c`` and a constant ``gamma``:

* ``u_a`` carries ``c[0] - gamma``,
* ``mu(j, k)_a`` carries ``c[j + k] - c[j] - c[k] + gamma``,
* ``monotone(j, k)_a`` carries ``c[k] - c[j]``.

These are exactly the twists for which every flow diagram commutes, so the
family yields non-strict flows with non-trivial hom-sets. ``order == 1``
recovers the plain poset flow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..core import EpsilonGrid
from .category import FinCat, Functor, NatTrans, compose_functors, identity_functor
from .flow import GridFlow


def poset_closure(elements: Sequence, relations) -> frozenset:
    """Reflexive-transitive closure of ``relations`` on ``elements``."""
    leq = {(x, x) for x in elements} | set(relations)
    changed = True
    while changed:
        changed = False
        for a, b in list(leq):
            for c, d in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return frozenset(leq)


def _mor(a, b, g: int, order: int) -> str:
    return f"{a}<={b}" if order == 1 else f"{a}<={b}:{g % order}"


def parse_morphism(m: str):
    """Split a poset-group morphism id into ``(a, b, group element)``."""
    arrow, _, g = m.partition(":")
    a, _, b = arrow.partition("<=")
    return a, b, int(g) if g else 0


def poset_category(elements: Sequence, leq, order: int = 1) -> FinCat:
    """The category ``P x B(Z/order)`` as a composition table."""
    elements = tuple(elements)
    leq = frozenset(leq)
    mors = {}
    for a in elements:
        for b in elements:
            if (a, b) in leq:
                for g in range(order):
                    mors[_mor(a, b, g, order)] = (a, b)
    table = {}
    for a in elements:
        for b in elements:
            if (a, b) not in leq:
                continue
            for c in elements:
                if (b, c) not in leq:
                    continue
                for x in range(order):
                    for y in range(order):
                        table[(_mor(b, c, y, order), _mor(a, b, x, order))] = _mor(a, c, x + y, order)
    ids = {a: _mor(a, a, 0, order) for a in elements}
    return FinCat(elements, mors, ids, table)


@dataclass(frozen=True)
class FlowSpec:
    """Parameters of a twisted poset-group flow; see the module docstring."""

    elements: tuple
    leq: frozenset
    omegas: tuple  # omegas[k] maps element -> element, k = 0..n
    grid: EpsilonGrid
    order: int = 1
    c: tuple = ()
    gamma: int = 0

    def cochain(self, k: int) -> int:
        return self.c[k] if self.c else 0

    @property
    def unit_twist(self) -> int:
        return (self.cochain(0) - self.gamma) % self.order

    def mu_twist(self, j: int, k: int) -> int:
        return (self.cochain(j + k) - self.cochain(j) - self.cochain(k) + self.gamma) % self.order

    def monotone_twist(self, j: int, k: int) -> int:
        return (self.cochain(k) - self.cochain(j)) % self.order

    def is_superlinear(self) -> bool:
        """Translations are monotone, inflationary at 0, increasing and sub-additive."""
        n, leq, om = self.grid.n, self.leq, self.omegas
        for k in range(n + 1):
            for a, b in leq:
                if (om[k][a], om[k][b]) not in leq:
                    return False
        for x in self.elements:
            if (x, om[0][x]) not in leq:
                return False
            for j in range(n + 1):
                for k in range(j, n + 1):
                    if (om[j][x], om[k][x]) not in leq:
                        return False
                for k in range(n + 1 - j):
                    if (om[j][om[k][x]], om[j + k][x]) not in leq:
                        return False
        return True

    def build(self) -> GridFlow:
        if not self.is_superlinear():
            raise ValueError("translations are not a superlinear family on this poset")
        order, n = self.order, self.grid.n
        C = poset_category(self.elements, self.leq, order)
        T = []
        for k in range(n + 1):
            om = self.omegas[k]
            mor = {}
            for f, (a, b) in C.morphisms.items():
                g = parse_morphism(f)[2]
                mor[f] = _mor(om[a], om[b], g, order)
            T.append(Functor(C, C, dict(om), mor))

        om, xs = self.omegas, self.elements
        u = NatTrans(
            identity_functor(C), T[0],
            {a: _mor(a, om[0][a], self.unit_twist, order) for a in xs},
        )
        mu = {}
        for j in range(n + 1):
            for k in range(n + 1 - j):
                tw = self.mu_twist(j, k)
                mu[(j, k)] = NatTrans(
                    compose_functors(T[j], T[k]), T[j + k],
                    {a: _mor(om[j][om[k][a]], om[j + k][a], tw, order) for a in xs},
                )
        mono = {}
        for j in range(n + 1):
            for k in range(j, n + 1):
                tw = self.monotone_twist(j, k)
                mono[(j, k)] = NatTrans(
                    T[j], T[k], {a: _mor(om[j][a], om[k][a], tw, order) for a in xs}
                )
        return GridFlow(C, self.grid, tuple(T), mono, u, mu)


def chain_shift_spec(length: int, n: int, delta: float = 1.0) -> FlowSpec:
    """Chain ``0 < 1 < ... < length`` with the saturating shift ``i -> min(i + k, length)``."""
    elements = tuple(str(i) for i in range(length + 1))
    leq = frozenset((str(i), str(j)) for i in range(length + 1) for j in range(i, length + 1))
    omegas = tuple(
        {str(i): str(min(i + k, length)) for i in range(length + 1)} for k in range(n + 1)
    )
    return FlowSpec(elements, leq, omegas, EpsilonGrid(delta, n))


def shift_flow(length: int = 6, n: int = 6, delta: float = 1.0) -> GridFlow:
    """The strict shift flow on the chain ``{0..length}``."""
    return chain_shift_spec(length, n, delta).build()


def discrete_flow(objects=("a", "b"), n: int = 4) -> GridFlow:
    """Identity flow on a discrete category: distinct objects are never interleaved."""
    elements = tuple(objects)
    leq = frozenset((x, x) for x in elements)
    omegas = tuple({x: x for x in elements} for _ in range(n + 1))
    return FlowSpec(elements, leq, omegas, EpsilonGrid(1.0, n)).build()
