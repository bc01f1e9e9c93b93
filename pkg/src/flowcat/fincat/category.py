"""Finite categories, functors and natural transformations.

Every algorithm here talks to categories through a small duck-typed surface:

* ``objects`` -- a finite sequence of hashable objects,
* ``hom(a, b)`` -- the morphisms ``a -> b`` in a fixed canonical order,
* ``dom(f)``, ``cod(f)``, ``identity(a)``, ``compose(g, f)`` (``g after f``).

:class:`FinCat` is the tabulated implementation (string ids, explicit
composition table, JSON-serialisable). Other modules provide lazily computed
categories with the same surface. Functors expose ``ob``/``mor`` and natural
transformations expose ``at``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterator, Mapping


class CompositionError(KeyError):
    """Raised when two morphisms cannot be composed."""

    def __str__(self):
        return self.args[0] if self.args else "composition error"


@dataclass(frozen=True)
class Violation:
    """One failed law.

    ``law`` names the diagram, ``at`` the object or morphisms where it failed,
    ``involves`` the table cells that the diagram read (e.g. ``("mu", 1, 1)``),
    ``detail`` a short human-readable explanation.
    """

    law: str
    at: Any = None
    involves: tuple = ()
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "law": self.law,
            "at": _plain(self.at),
            "involves": [_plain(x) for x in self.involves],
            "detail": self.detail,
        }


def _plain(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, (tuple, list)):
        return [_plain(v) for v in x]
    return repr(x)


@dataclass(frozen=True, eq=False)
class FinCat:
    """A finite category presented by its composition table.

    ``morphisms`` maps each morphism id to ``(dom, cod)``; ``identities`` maps
    each object to its identity id; ``table[(g, f)]`` is ``g after f``.
    """

    objects: tuple
    morphisms: Mapping[str, tuple]
    identities: Mapping[Hashable, str]
    table: Mapping[tuple, str]
    _hom: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        hom: dict = {}
        for f in sorted(self.morphisms):
            hom.setdefault(tuple(self.morphisms[f]), []).append(f)
        object.__setattr__(self, "_hom", {k: tuple(v) for k, v in hom.items()})

    def __eq__(self, other):
        if not isinstance(other, FinCat):
            return NotImplemented
        return (
            self.objects == other.objects
            and dict(self.morphisms) == dict(other.morphisms)
            and dict(self.identities) == dict(other.identities)
            and dict(self.table) == dict(other.table)
        )

    __hash__ = object.__hash__

    def hom(self, a, b) -> tuple:
        return self._hom.get((a, b), ())

    def dom(self, f):
        return self.morphisms[f][0]

    def cod(self, f):
        return self.morphisms[f][1]

    def identity(self, a):
        return self.identities[a]

    def compose(self, g, f):
        try:
            return self.table[(g, f)]
        except KeyError:
            raise CompositionError(f"no composite {g} o {f}") from None

    def __repr__(self):
        return f"FinCat({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def morphisms(cat) -> Iterator:
    """All morphisms of ``cat`` in (dom, cod, hom-order) order."""
    for a in cat.objects:
        for b in cat.objects:
            yield from cat.hom(a, b)


def compose(cat, *fs):
    """``compose(cat, h, g, f) == h o g o f``, checking dom/cod at every step."""
    result = fs[-1]
    for g in reversed(fs[:-1]):
        if cat.cod(result) != cat.dom(g):
            raise CompositionError(f"{g} o {result}: codomain/domain mismatch")
        result = cat.compose(g, result)
    return result


@dataclass(frozen=True, eq=False)
class Functor:
    """A tabulated functor: dictionaries on objects and morphisms."""

    source: Any
    target: Any
    obj: Mapping
    mor: Mapping

    def ob(self, a):
        try:
            return self.obj[a]
        except KeyError:
            raise CompositionError(f"functor undefined on object {a!r}") from None

    def __call__(self, f):
        try:
            return self.mor[f]
        except KeyError:
            raise CompositionError(f"functor undefined on morphism {f!r}") from None

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return dict(self.obj) == dict(other.obj) and dict(self.mor) == dict(other.mor)

    __hash__ = object.__hash__


@dataclass(frozen=True, eq=False)
class LazyFunctor:
    """A functor given by callables, for categories too large to tabulate."""

    source: Any
    target: Any
    on_obj: Callable
    on_mor: Callable

    def ob(self, a):
        return self.on_obj(a)

    def __call__(self, f):
        return self.on_mor(f)


@dataclass(frozen=True, eq=False)
class NatTrans:
    """A tabulated natural transformation ``source => target``."""

    source: Any
    target: Any
    components: Mapping

    def at(self, a):
        try:
            return self.components[a]
        except KeyError:
            raise CompositionError(f"no component at {a!r}") from None

    def __eq__(self, other):
        if not isinstance(other, NatTrans):
            return NotImplemented
        return dict(self.components) == dict(other.components)

    __hash__ = object.__hash__


@dataclass(frozen=True, eq=False)
class LazyNatTrans:
    source: Any
    target: Any
    component: Callable

    def at(self, a):
        return self.component(a)


class ComposedView:
    """Functor-like ``outer o inner`` evaluated on demand."""

    def __init__(self, outer, inner):
        self.outer, self.inner = outer, inner
        self.source, self.target = inner.source, outer.target

    def ob(self, a):
        return self.outer.ob(self.inner.ob(a))

    def __call__(self, f):
        return self.outer(self.inner(f))


@dataclass(frozen=True, eq=False)
class Retyped:
    """Components of ``inner`` viewed as a transformation ``source => target``."""

    inner: Any
    source: Any
    target: Any

    def at(self, a):
        return self.inner.at(a)


def identity_functor(cat) -> Functor:
    return Functor(
        cat, cat, {a: a for a in cat.objects}, {f: f for f in morphisms(cat)}
    )


def identity_nat(functor) -> NatTrans:
    """The identity transformation on ``functor``."""
    tgt = functor.target
    return NatTrans(
        functor, functor, {a: tgt.identity(functor.ob(a)) for a in functor.source.objects}
    )


def compose_functors(outer, inner) -> Functor:
    """Tabulate ``outer o inner``."""
    src = inner.source
    return Functor(
        src,
        outer.target,
        {a: outer.ob(inner.ob(a)) for a in src.objects},
        {f: outer(inner(f)) for f in morphisms(src)},
    )


def tabulate(functor) -> Functor:
    """Materialise any functor-like object as a :class:`Functor`."""
    src = functor.source
    return Functor(
        src,
        functor.target,
        {a: functor.ob(a) for a in src.objects},
        {f: functor(f) for f in morphisms(src)},
    )


def check_fincat(cat: FinCat) -> list[Violation]:
    """Exhaustively check the category axioms of a tabulated category.

    Reports ill-typed identities, missing and extraneous table entries,
    ill-typed composites, identity-law failures and associativity failures.
    """
    out: list[Violation] = []
    objs = set(cat.objects)
    for f, (a, b) in cat.morphisms.items():
        if a not in objs or b not in objs:
            out.append(Violation("typing", f, detail=f"endpoints {a!r}->{b!r} not objects"))
    for a in cat.objects:
        i = cat.identities.get(a)
        if i is None or i not in cat.morphisms:
            out.append(Violation("identity-missing", a))
        elif tuple(cat.morphisms[i]) != (a, a):
            out.append(Violation("identity-typing", a, (i,), f"{i} is not an endomorphism of {a}"))

    for (g, f), h in cat.table.items():
        if f not in cat.morphisms or g not in cat.morphisms:
            out.append(Violation("extraneous", (g, f), detail="unknown morphism in table key"))
            continue
        if cat.cod(f) != cat.dom(g):
            out.append(Violation("extraneous", (g, f), detail="entry for non-composable pair"))
            continue
        if h not in cat.morphisms or tuple(cat.morphisms[h]) != (cat.dom(f), cat.cod(g)):
            out.append(Violation("composite-typing", (g, f), ((g, f),), f"{g} o {f} = {h} has wrong type"))

    def comp(g, f):
        h = cat.table.get((g, f))
        if h is None or h not in cat.morphisms:
            return None
        return h

    for a in cat.objects:
        for b in cat.objects:
            for f in cat.hom(a, b):
                for c in cat.objects:
                    for g in cat.hom(b, c):
                        if (g, f) not in cat.table:
                            out.append(Violation("missing", (g, f), ((g, f),), f"no entry for {g} o {f}"))

    for f, (a, b) in cat.morphisms.items():
        ia, ib = cat.identities.get(a), cat.identities.get(b)
        if ia is not None and (ia, f) in cat.table and comp(f, ia) != f:
            out.append(Violation("identity-law", f, ((f, ia),), f"{f} o id_{a} != {f}"))
        if ib is not None and (ib, f) in cat.table and comp(ib, f) != f:
            out.append(Violation("identity-law", f, ((ib, f),), f"id_{b} o {f} != {f}"))

    for a in cat.objects:
        for b in cat.objects:
            for f in cat.hom(a, b):
                for c in cat.objects:
                    for g in cat.hom(b, c):
                        gf = comp(g, f)
                        if gf is None:
                            continue
                        for d in cat.objects:
                            for h in cat.hom(c, d):
                                hg = comp(h, g)
                                if hg is None:
                                    continue
                                left, right = comp(h, gf), comp(hg, f)
                                if left is not None and right is not None and left != right:
                                    out.append(
                                        Violation(
                                            "associativity",
                                            (h, g, f),
                                            ((g, f), (h, g), (h, gf), (hg, f)),
                                            f"{h} o ({g} o {f}) = {left} but ({h} o {g}) o {f} = {right}",
                                        )
                                    )
    return out


def check_functor(F, name: str = "functor", involves: tuple = ()) -> list[Violation]:
    """Check that ``F`` preserves typing, identities and composition."""
    out: list[Violation] = []
    src, tgt = F.source, F.target
    tag = involves or (name,)
    for a in src.objects:
        try:
            Fa = F.ob(a)
            if F(src.identity(a)) != tgt.identity(Fa):
                out.append(Violation(f"{name}:identity", a, tag, "identity not preserved"))
        except (CompositionError, KeyError) as exc:
            out.append(Violation(f"{name}:undefined", a, tag, str(exc)))
    for f in morphisms(src):
        try:
            Ff = F(f)
            if tgt.dom(Ff) != F.ob(src.dom(f)) or tgt.cod(Ff) != F.ob(src.cod(f)):
                out.append(Violation(f"{name}:typing", f, tag, f"image {Ff!r} has wrong type"))
        except (CompositionError, KeyError) as exc:
            out.append(Violation(f"{name}:undefined", f, tag, str(exc)))
    if out:
        return out
    for f in morphisms(src):
        b = src.cod(f)
        for c in src.objects:
            for g in src.hom(b, c):
                try:
                    lhs = F(src.compose(g, f))
                    rhs = tgt.compose(F(g), F(f))
                except (CompositionError, KeyError) as exc:
                    out.append(Violation(f"{name}:composition", (g, f), tag, str(exc)))
                    continue
                if lhs != rhs:
                    out.append(Violation(f"{name}:composition", (g, f), tag, "F(g o f) != F(g) o F(f)"))
    return out


def check_nat(alpha, name: str = "nat", involves: tuple = ()) -> list[Violation]:
    """Check component typing and naturality of ``alpha: S => T``."""
    out: list[Violation] = []
    S, T = alpha.source, alpha.target
    src, tgt = S.source, S.target
    tag = involves or (name,)
    for a in src.objects:
        try:
            c = alpha.at(a)
            if tgt.dom(c) != S.ob(a) or tgt.cod(c) != T.ob(a):
                out.append(Violation(f"{name}:typing", a, tag, f"component {c!r} has wrong type"))
        except (CompositionError, KeyError) as exc:
            out.append(Violation(f"{name}:typing", a, tag, str(exc)))
    if out:
        return out
    for f in morphisms(src):
        a, b = src.dom(f), src.cod(f)
        try:
            lhs = compose(tgt, T(f), alpha.at(a))
            rhs = compose(tgt, alpha.at(b), S(f))
        except (CompositionError, KeyError) as exc:
            out.append(Violation(f"{name}:naturality", f, tag, str(exc)))
            continue
        if lhs != rhs:
            out.append(Violation(f"{name}:naturality", f, tag, "square does not commute"))
    return out
