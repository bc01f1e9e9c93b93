"""Simplicial complexes and their F2 homology with explicit bases.

A complex is a tuple of simplices, each a sorted tuple of vertex ids, closed
under taking faces. Homology bases are built from cycle representatives so
that maps induced by simplicial maps can be read off in coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

import numpy as np

from ..core import PreconditionError
from ..gpm import f2


def _key(v):
    # Mixed int/str vertex ids still need a total order.
    return (type(v).__name__, v)


def simplex(vertices: Iterable[Hashable]) -> tuple:
    s = tuple(sorted(set(vertices), key=_key))
    if not s:
        raise PreconditionError("a simplex needs at least one vertex")
    return s


def closure(simplices: Iterable[Iterable[Hashable]]) -> tuple:
    """All faces of the given simplices, sorted by dimension then lexicographically."""
    out = set()
    for s in simplices:
        s = simplex(s)
        for r in range(1, len(s) + 1):
            out.update(itertools.combinations(s, r))
    return tuple(sorted(out, key=lambda s: (len(s), [_key(v) for v in s])))


def is_closed(simplices: Iterable[tuple]) -> bool:
    have = set(simplices)
    return all(
        face in have for s in have for face in itertools.combinations(s, len(s) - 1) if face
    )


def skeleton(K: Iterable[tuple], p: int) -> list:
    """The ``p``-simplices of ``K`` in canonical order."""
    return sorted((s for s in K if len(s) == p + 1), key=lambda s: [_key(v) for v in s])


def dimension(K: Iterable[tuple]) -> int:
    return max((len(s) - 1 for s in K), default=-1)


def euler_characteristic(K: Iterable[tuple]) -> int:
    return sum((-1) ** (len(s) - 1) for s in K)


def boundary_matrix(faces: list, cofaces: list) -> np.ndarray:
    """F2 boundary from ``cofaces`` (columns) to ``faces`` (rows)."""
    index = {s: i for i, s in enumerate(faces)}
    D = f2.zeros(len(faces), len(cofaces))
    for j, s in enumerate(cofaces):
        if len(s) == 1:
            continue
        for face in itertools.combinations(s, len(s) - 1):
            D[index[face], j] = 1
    return D


@dataclass(frozen=True, eq=False)
class HomologyBasis:
    """``reps`` are cycle representatives (rows, over ``simplices``) of a basis of ``H_p``."""

    p: int
    simplices: tuple
    reps: np.ndarray
    _solver: np.ndarray
    _pivots: tuple

    @property
    def dim(self) -> int:
        return self.reps.shape[0]

    def coordinates(self, z) -> np.ndarray:
        """Coordinates of the class of the cycle ``z`` in the basis ``reps``."""
        z = f2.as_f2(z).reshape(-1)
        nb = self._solver.shape[0] - self.dim  # boundary part comes first
        if not self.dim:
            return np.zeros(0, dtype=np.uint8)
        # Each solver row is [basis vector | unit tag]; reducing z tracks the combination.
        width = len(self.simplices)
        acc = np.concatenate([z, np.zeros(self._solver.shape[0], dtype=np.uint8)])
        for row, piv in zip(self._solver, self._pivots):
            if acc[piv]:
                acc ^= row
        if acc[:width].any():
            raise PreconditionError("chain is not a cycle of this complex")
        return acc[width + nb:].copy()


def homology_basis(K: Iterable[tuple], p: int) -> HomologyBasis:
    K = tuple(K)
    cells = tuple(skeleton(K, p))
    lower, upper = skeleton(K, p - 1) if p > 0 else [], skeleton(K, p + 1)
    n = len(cells)
    if p > 0 and cells:
        Z = f2.nullspace(boundary_matrix(lower, list(cells)))
    else:
        Z = f2.eye(n)
    Bfull = boundary_matrix(list(cells), upper).T if upper and n else f2.zeros(0, n)
    span, piv = f2.rref(Bfull)
    span = span[: len(piv)]
    basis = list(span)
    reps = []
    # Greedily extend a boundary basis by cycles to a basis of Z.
    for z in Z:
        if f2.reduce_against(z, span, piv).any():
            reps.append(z.copy())
            basis.append(z.copy())
            span, piv = f2.rref(np.array(basis))
            span = span[: len(piv)]
    reps_arr = np.array(reps, dtype=np.uint8).reshape(len(reps), n)
    rows = np.array(basis, dtype=np.uint8).reshape(len(basis), n)
    tagged = np.concatenate([rows, f2.eye(len(basis))], axis=1)
    solver, pivots = f2.rref(tagged)
    # Rows are independent on the chain part, so every pivot lies there.
    solver = solver[: len(basis)]
    return HomologyBasis(p, cells, reps_arr, solver, tuple(pivots[: len(basis)]))


def betti(K: Iterable[tuple], p: int) -> int:
    """``dim H_p(K; F2)`` by rank-nullity, without building a basis."""
    K = tuple(K)
    cells, lower, upper = skeleton(K, p), skeleton(K, p - 1), skeleton(K, p + 1)
    if not cells:
        return 0
    z = len(cells) - (f2.rank(boundary_matrix(lower, cells)) if p > 0 else 0)
    b = f2.rank(boundary_matrix(cells, upper)) if upper else 0
    return z - b


def push_chain(chain, source: HomologyBasis, vmap: Mapping, L: set, target_cells: tuple) -> np.ndarray:
    """Image of a ``p``-chain under a simplicial vertex map; degenerate images vanish."""
    index = {s: i for i, s in enumerate(target_cells)}
    out = np.zeros(len(target_cells), dtype=np.uint8)
    p = source.p
    for c, s in zip(chain, source.simplices):
        if not c:
            continue
        img = simplex(vmap[v] for v in s)
        if img not in L:
            raise PreconditionError(f"{s} maps to {img}, which is not a simplex of the target")
        if len(img) == p + 1:
            out[index[img]] ^= 1
    return out


def induced_map(
    HK: HomologyBasis, HL: HomologyBasis, vmap: Mapping, L: Iterable[tuple]
) -> np.ndarray:
    """Matrix of ``H_p(K) -> H_p(L)`` induced by the vertex map ``vmap``."""
    if HK.p != HL.p:
        raise PreconditionError("bases are in different degrees")
    Lset = set(L)
    M = f2.zeros(HL.dim, HK.dim)
    for j, z in enumerate(HK.reps):
        M[:, j] = HL.coordinates(push_chain(z, HK, vmap, Lset, HL.simplices))
    return M
