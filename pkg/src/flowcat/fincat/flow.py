"""Flows sampled on an epsilon grid, their coherence laws, and interleavings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from ..core import INF, EpsilonGrid, PreconditionError
from .category import (
    ComposedView,
    CompositionError,
    Retyped,
    Violation,
    check_functor,
    check_nat,
    compose,
    identity_functor,
)


@dataclass(frozen=True, eq=False)
class GridFlow:
    """A flow on ``base`` stored at grid indices ``0..grid.n``.

    ``T[k]`` is the translation by ``k * grid.delta``; ``monotone[(j, k)]`` for
    ``j <= k`` is ``T[j] => T[k]``; ``u`` is ``Id => T[0]``; ``mu[(j, k)]`` for
    ``j + k <= n`` is ``T[j] T[k] => T[j + k]``.
    """

    base: Any
    grid: EpsilonGrid
    T: Sequence[Any]
    monotone: Mapping[tuple, Any]
    u: Any
    mu: Mapping[tuple, Any]

    @property
    def n(self) -> int:
        return self.grid.n

    def translate(self, k: int, a):
        return self.T[k].ob(a)


def _pairs_sum(n: int):
    return [(j, k) for j in range(n + 1) for k in range(n + 1 - j)]


def _pairs_le(n: int):
    return [(j, k) for j in range(n + 1) for k in range(j, n + 1)]


def check_flow(flow: GridFlow) -> list[Violation]:
    """Evaluate every coherence diagram of ``flow`` at every object and index.

    Covers functoriality of each translation, naturality of ``u``, ``mu`` and
    ``monotone``, both unit triangles, the associativity square, the
    monotonicity square, and functoriality of ``monotone`` in the index.
    """
    C, n = flow.base, flow.n
    out: list[Violation] = []

    if len(flow.T) != n + 1:
        out.append(Violation("structure", None, ("T",), f"expected {n + 1} translations"))
        return out
    missing = [("mu",) + p for p in _pairs_sum(n) if p not in flow.mu]
    missing += [("monotone",) + p for p in _pairs_le(n) if p not in flow.monotone]
    if missing:
        return [Violation("structure", None, tuple(missing), "missing structure maps")]

    for k in range(n + 1):
        out += check_functor(flow.T[k], f"T({k})", (("T", k),))
    # Naturality is checked against the flow's own translations, not whatever
    # functors the stored transformations happen to carry.
    T = flow.T
    out += check_nat(Retyped(flow.u, identity_functor(C), T[0]), "u", (("u",),))
    for j, k in _pairs_sum(n):
        alpha = Retyped(flow.mu[(j, k)], ComposedView(T[j], T[k]), T[j + k])
        out += check_nat(alpha, f"mu({j},{k})", (("mu", j, k),))
    for j, k in _pairs_le(n):
        alpha = Retyped(flow.monotone[(j, k)], T[j], T[k])
        out += check_nat(alpha, f"monotone({j},{k})", (("monotone", j, k),))
    if out:
        # Diagram checks below assume well-typed data.
        return out

    T, u, mu, mono = flow.T, flow.u, flow.mu, flow.monotone

    def diagram(law, at, involves, lhs, rhs):
        try:
            left, right = lhs(), rhs()
        except (CompositionError, KeyError) as exc:
            out.append(Violation(law, at, involves, f"ill-typed: {exc}"))
            return
        if left != right:
            out.append(Violation(law, at, involves, f"{left!r} != {right!r}"))

    for a in C.objects:
        for k in range(n + 1):
            Tka = T[k].ob(a)
            diagram(
                "left-unit", a, (("mu", 0, k), ("u",), ("T", k)),
                lambda: compose(C, mu[(0, k)].at(a), u.at(Tka)),
                lambda: C.identity(Tka),
            )
            diagram(
                "right-unit", a, (("mu", k, 0), ("u",), ("T", k)),
                lambda: compose(C, mu[(k, 0)].at(a), T[k](u.at(a))),
                lambda: C.identity(Tka),
            )

        for j in range(n + 1):
            for k in range(n + 1 - j):
                for l in range(n + 1 - j - k):
                    diagram(
                        "associativity", a,
                        (("mu", j, k), ("mu", j + k, l), ("mu", k, l), ("mu", j, k + l)),
                        lambda: compose(C, mu[(j + k, l)].at(a), mu[(j, k)].at(T[l].ob(a))),
                        lambda: compose(C, mu[(j, k + l)].at(a), T[j](mu[(k, l)].at(a))),
                    )

        for j, k in _pairs_sum(n):
            for j2 in range(j, n + 1):
                for k2 in range(k, n + 1 - j2):
                    if (j, k) == (j2, k2):
                        continue
                    diagram(
                        "monotonicity", a,
                        (("mu", j, k), ("mu", j2, k2), ("monotone", j + k, j2 + k2),
                         ("monotone", j, j2), ("monotone", k, k2)),
                        lambda: compose(C, mono[(j + k, j2 + k2)].at(a), mu[(j, k)].at(a)),
                        lambda: compose(
                            C,
                            mu[(j2, k2)].at(a),
                            T[j2](mono[(k, k2)].at(a)),
                            mono[(j, j2)].at(T[k].ob(a)),
                        ),
                    )

        for k in range(n + 1):
            diagram(
                "monotone-identity", a, (("monotone", k, k),),
                lambda: mono[(k, k)].at(a),
                lambda: C.identity(T[k].ob(a)),
            )
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                for k in range(j + 1, n + 1):
                    diagram(
                        "monotone-composition", a,
                        (("monotone", i, j), ("monotone", j, k), ("monotone", i, k)),
                        lambda: compose(C, mono[(j, k)].at(a), mono[(i, j)].at(a)),
                        lambda: mono[(i, k)].at(a),
                    )
    return out


def _check_index(flow: GridFlow, k: int) -> None:
    if int(k) != k or not 0 <= k <= flow.grid.half:
        raise PreconditionError(
            f"interleaving index {k} outside 0..{flow.grid.half} (need 2k <= {flow.n})"
        )


def pentagon_targets(flow: GridFlow, a, k: int):
    """The common value both pentagon legs must hit at ``a``: grow(0 -> 2k) o u."""
    C = flow.base
    return compose(C, flow.monotone[(0, 2 * k)].at(a), flow.u.at(a))


def is_weak_interleaving(flow: GridFlow, a, b, k: int, phi, psi) -> bool:
    """Do ``phi: a -> T_k b`` and ``psi: b -> T_k a`` make both pentagons commute?"""
    _check_index(flow, k)
    C, T, mu = flow.base, flow.T, flow.mu
    Tka, Tkb = T[k].ob(a), T[k].ob(b)
    try:
        if (C.dom(phi), C.cod(phi)) != (a, Tkb) or (C.dom(psi), C.cod(psi)) != (b, Tka):
            return False
        left = compose(C, mu[(k, k)].at(a), T[k](psi), phi)
        right = compose(C, mu[(k, k)].at(b), T[k](phi), psi)
    except (CompositionError, KeyError):
        return False
    return left == pentagon_targets(flow, a, k) and right == pentagon_targets(flow, b, k)


def find_weak_interleaving(flow: GridFlow, a, b, k: int):
    """Exhaustive search for a weak interleaving at grid index ``k``.

    Candidates are visited in hom-order (``phi`` outer, ``psi`` inner) and the
    first pair passing both pentagons is returned; ``None`` if there is none.
    """
    _check_index(flow, k)
    C, T, mu = flow.base, flow.T, flow.mu
    Tka, Tkb = T[k].ob(a), T[k].ob(b)
    phis = C.hom(a, Tkb)
    psis = C.hom(b, Tka)
    if not phis or not psis:
        return None
    target_a = pentagon_targets(flow, a, k)
    target_b = pentagon_targets(flow, b, k)
    mu_a, mu_b = mu[(k, k)].at(a), mu[(k, k)].at(b)
    # Precompose mu with the translated candidates once per candidate.
    lifted_psi = [compose(C, mu_a, T[k](psi)) for psi in psis]
    lifted_phi = [compose(C, mu_b, T[k](phi)) for phi in phis]
    if len(phis) * len(psis) <= _NESTED_LIMIT:
        for phi, lphi in zip(phis, lifted_phi):
            for psi, lpsi in zip(psis, lifted_psi):
                if C.compose(lpsi, phi) == target_a and C.compose(lphi, psi) == target_b:
                    return phi, psi
        return None
    return _grouped_search(C, phis, psis, lifted_phi, lifted_psi, target_a, target_b)


#: Above this many candidate pairs the grouped search is used instead of the double loop.
_NESTED_LIMIT = 4096


def _classes(lifted):
    out: dict = {}
    for i, x in enumerate(lifted):
        out.setdefault(x, []).append(i)
    return out


def _grouped_search(C, phis, psis, lifted_phi, lifted_psi, target_a, target_b):
    """Same answer as the double loop, with cost linear in each hom-set.

    The first pentagon depends on ``psi`` only through its lift and the
    second on ``phi`` only through its lift, so grouping each side by lift
    value splits the pair condition into two independent ones. One side is
    solved for every lift class of the other; the second side is then only
    evaluated on the class pairs that survived. The lexicographically first
    passing pair is recovered exactly.
    """
    cls_phi, cls_psi = _classes(lifted_phi), _classes(lifted_psi)
    if len(cls_psi) * len(phis) < len(cls_phi) * len(psis):
        # Mirror the problem so the cheaper side is solved first.
        pairs = [(i, j) for j, i in _grouped_core(C, psis, phis, cls_psi, cls_phi, target_b, target_a)]
    else:
        pairs = _grouped_core(C, phis, psis, cls_phi, cls_psi, target_a, target_b)
    if not pairs:
        return None
    i, j = min(pairs)
    return phis[i], psis[j]


def _grouped_core(C, xs, ys, cls_x, cls_y, target_x, target_y):
    """Index pairs ``(i, j)`` with ``lift(ys[j]) o xs[i] = target_x`` and ``lift(xs[i]) o ys[j] = target_y``.

    Not every passing pair is listed: within each pair of lift classes only
    the least ``i`` and least ``j`` are kept, which is all a lexicographic
    minimum needs in either order.
    """
    y_class = {j: y for y, idx in cls_y.items() for j in idx}
    # For each x-lift: least y index in each y-class passing the second condition.
    good_y = {}
    for lx in cls_x:
        best: dict = {}
        for j, y in enumerate(ys):
            ly = y_class[j]
            if ly not in best and C.compose(lx, y) == target_y:
                best[ly] = j
        if best:
            good_y[lx] = best
    wanted: dict = {}
    for lx, by_class in good_y.items():
        for ly in by_class:
            wanted.setdefault(ly, set()).add(lx)
    pairs = []
    for ly, lxs in wanted.items():
        for lx in lxs:
            for i in cls_x[lx]:
                if C.compose(ly, xs[i]) == target_x:
                    pairs.append((i, good_y[lx][ly]))
                    break
    return pairs


@dataclass(frozen=True)
class InterleavingResult:
    """Outcome of a grid scan: ``index`` is ``None`` when nothing was found.

    ``capped`` flags that the infinite value only means "no interleaving
    within the grid range", i.e. the true distance is at least the cap or
    infinite.
    """

    value: float
    index: int | None
    witness: tuple | None
    capped: bool

    def as_dict(self) -> dict:
        from ..core import format_ext

        return {
            "value": format_ext(self.value),
            "index": self.index,
            "witness": None if self.witness is None else [repr(w) if not isinstance(w, str) else w for w in self.witness],
            "capped": self.capped,
        }


def interleaving_search(flow: GridFlow, a, b) -> InterleavingResult:
    """Scan ``k = 0, 1, ...`` up to ``n // 2`` and stop at the first interleaving."""
    for k in range(flow.grid.half + 1):
        w = find_weak_interleaving(flow, a, b, k)
        if w is not None:
            return InterleavingResult(k * flow.grid.delta, k, w, False)
    return InterleavingResult(INF, None, None, True)


def interleaving_distance(flow: GridFlow, a, b) -> float:
    """Grid interleaving distance; exact on the grid, ``inf`` beyond the cap."""
    return interleaving_search(flow, a, b).value


def interleaving_index(flow: GridFlow, a, b) -> int | None:
    """Grid index of the interleaving distance, ``None`` if beyond the cap."""
    return interleaving_search(flow, a, b).index


def compose_interleavings(flow: GridFlow, first, j: int, second, k: int):
    """Glue ``first`` (``a ~ b`` at ``j``) and ``second`` (``b ~ c`` at ``k``).

    Returns the ``(j + k)``-interleaving of ``a`` and ``c`` obtained by
    translating the second pair along the first and multiplying.
    """
    if j < 0 or k < 0 or j + k > flow.grid.half:
        raise PreconditionError(f"composite index {j}+{k} exceeds {flow.grid.half}")
    C, T, mu = flow.base, flow.T, flow.mu
    phi, psi = first
    phi2, psi2 = second
    c = C.dom(psi2)
    a = C.dom(phi)
    phi3 = compose(C, mu[(j, k)].at(c), T[j](phi2), phi)
    psi3 = compose(C, mu[(k, j)].at(a), T[k](psi), psi2)
    return phi3, psi3


def extend_interleaving(flow: GridFlow, pair, j: int, k: int):
    """Push a ``j``-interleaving to index ``k >= j`` along ``monotone(j, k)``."""
    if not 0 <= j <= k <= flow.grid.half:
        raise PreconditionError(f"cannot extend from {j} to {k}")
    C = flow.base
    phi, psi = pair
    a, b = C.dom(phi), C.dom(psi)
    return (
        compose(C, flow.monotone[(j, k)].at(b), phi),
        compose(C, flow.monotone[(j, k)].at(a), psi),
    )
