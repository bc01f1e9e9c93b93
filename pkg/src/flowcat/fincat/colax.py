"""Colax equivariant functors between grid flows, and their Lipschitz property."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from ..core import PreconditionError, ext_le
from .category import (
    ComposedView,
    CompositionError,
    Retyped,
    NatTrans,
    Violation,
    check_functor,
    check_nat,
    compose,
    compose_functors,
    identity_functor,
    morphisms,
)
from .flow import GridFlow, interleaving_search, is_weak_interleaving


@dataclass(frozen=True, eq=False)
class ColaxFunctor:
    """``H`` with comparison maps ``eta[k]: H T_k => S_k H`` for each grid index."""

    source: GridFlow
    target: GridFlow
    H: Any
    eta: Sequence[Any]


def _same_grid(f: GridFlow, g: GridFlow) -> bool:
    return f.grid == g.grid


def check_colax(cf: ColaxFunctor) -> list[Violation]:
    """Evaluate naturality of ``eta`` and the unit, monotonicity and hexagon diagrams."""
    src, tgt = cf.source, cf.target
    if not _same_grid(src, tgt):
        raise PreconditionError(f"grid mismatch: {src.grid} vs {tgt.grid}")
    n = src.n
    C, D, H = src.base, tgt.base, cf.H
    out: list[Violation] = []
    if len(cf.eta) != n + 1:
        return [Violation("structure", None, ("eta",), f"expected {n + 1} components")]

    out += check_functor(H, "H", (("H",),))
    if out:
        return out
    T, S = src.T, tgt.T
    for k in range(n + 1):
        e = cf.eta[k]
        # eta[k] is H T_k => S_k H; wrap the two functors for the naturality check.
        lhs_f = ComposedView(H, T[k])
        rhs_f = ComposedView(S[k], H)
        out += check_nat(Retyped(e, lhs_f, rhs_f), f"eta({k})", (("eta", k),))
    if out:
        return out

    def diagram(law, at, involves, lhs, rhs):
        try:
            left, right = lhs(), rhs()
        except (CompositionError, KeyError) as exc:
            out.append(Violation(law, at, involves, f"ill-typed: {exc}"))
            return
        if left != right:
            out.append(Violation(law, at, involves, f"{left!r} != {right!r}"))

    eta = cf.eta
    for a in C.objects:
        Ha = H.ob(a)
        diagram(
            "colax-unit", a, (("eta", 0),),
            lambda: compose(D, eta[0].at(a), H(src.u.at(a))),
            lambda: tgt.u.at(Ha),
        )
        for j in range(n + 1):
            for k in range(j, n + 1):
                diagram(
                    "colax-monotonicity", a, (("eta", j), ("eta", k)),
                    lambda: compose(D, tgt.monotone[(j, k)].at(Ha), eta[j].at(a)),
                    lambda: compose(D, eta[k].at(a), H(src.monotone[(j, k)].at(a))),
                )
        for j in range(n + 1):
            for k in range(n + 1 - j):
                diagram(
                    "colax-hexagon", a, (("eta", j), ("eta", k), ("eta", j + k)),
                    lambda: compose(D, eta[j + k].at(a), H(src.mu[(j, k)].at(a))),
                    lambda: compose(
                        D,
                        tgt.mu[(j, k)].at(Ha),
                        S[j](eta[k].at(a)),
                        eta[j].at(T[k].ob(a)),
                    ),
                )
    return out


def push_interleaving(cf: ColaxFunctor, pair, k: int):
    """Image of a ``k``-interleaving ``(phi, psi)`` of ``a, b`` under ``cf``."""
    phi, psi = pair
    C, D, H = cf.source.base, cf.target.base, cf.H
    a, b = C.dom(phi), C.dom(psi)
    return (
        compose(D, cf.eta[k].at(b), H(phi)),
        compose(D, cf.eta[k].at(a), H(psi)),
    )


@dataclass
class LipschitzReport:
    rows: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        from ..core import format_ext

        fmt = lambda r: {
            "a": _name(r[0]), "b": _name(r[1]),
            "source": format_ext(r[2]), "target": format_ext(r[3]), "ok": r[4],
        }
        return {
            "rows": [fmt(r) for r in self.rows],
            "violations": [fmt(r) for r in self.violations],
            "ok": self.ok,
        }


def _name(x):
    return x if isinstance(x, str) else repr(x)


def verify_lipschitz(cf: ColaxFunctor, pairs, push: bool = True) -> LipschitzReport:
    """Compare ``d_target(H a, H b)`` with ``d_source(a, b)`` on each pair.

    With ``push`` the source witness is also transported and re-verified in
    the target; a failing transport counts as a violation too.
    """
    report = LipschitzReport()
    H = cf.H
    for a, b in pairs:
        s = interleaving_search(cf.source, a, b)
        t = interleaving_search(cf.target, H.ob(a), H.ob(b))
        ok = ext_le(t.value, s.value)
        if ok and push and s.witness is not None:
            try:
                Phi, Psi = push_interleaving(cf, s.witness, s.index)
                ok = is_weak_interleaving(cf.target, H.ob(a), H.ob(b), s.index, Phi, Psi)
            except (CompositionError, KeyError):
                ok = False
        row = (a, b, s.value, t.value, ok)
        report.rows.append(row)
        if not ok:
            report.violations.append(row)
    return report


def identity_colax(flow: GridFlow) -> ColaxFunctor:
    C = flow.base
    Id = identity_functor(C)
    eta = [
        NatTrans(None, None, {a: C.identity(flow.T[k].ob(a)) for a in C.objects})
        for k in range(flow.n + 1)
    ]
    return ColaxFunctor(flow, flow, Id, eta)


def compose_colax(f: ColaxFunctor, g: ColaxFunctor) -> ColaxFunctor:
    """``g o f`` with comparison ``eta_g(k) at H_f a`` after ``H_g(eta_f(k) at a)``."""
    if f.target is not g.source and not _flows_equal(f.target, g.source):
        raise PreconditionError("middle flows of the composite do not match")
    if not (_same_grid(f.source, f.target) and _same_grid(g.source, g.target)):
        raise PreconditionError("grid mismatch")
    C, E = f.source.base, g.target.base
    H = compose_functors(g.H, f.H)
    eta = []
    for k in range(f.source.n + 1):
        comps = {
            a: compose(E, g.eta[k].at(f.H.ob(a)), g.H(f.eta[k].at(a)))
            for a in C.objects
        }
        eta.append(NatTrans(None, None, comps))
    return ColaxFunctor(f.source, g.target, H, eta)


def _flows_equal(x: GridFlow, y: GridFlow) -> bool:
    if x.grid != y.grid or x.base != y.base:
        return False
    try:
        return (
            all(a == b for a, b in zip(x.T, y.T))
            and x.u == y.u
            and dict(x.mu) == dict(y.mu)
            and dict(x.monotone) == dict(y.monotone)
        )
    except TypeError:
        return False


def colax_equal(f: ColaxFunctor, g: ColaxFunctor) -> bool:
    """Structural equality of the underlying functors and comparison maps."""
    C = f.source.base
    if f.source is not g.source and not _flows_equal(f.source, g.source):
        return False
    for a in C.objects:
        if f.H.ob(a) != g.H.ob(a):
            return False
        for k in range(f.source.n + 1):
            if f.eta[k].at(a) != g.eta[k].at(a):
                return False
    return all(f.H(m) == g.H(m) for m in morphisms(C))
