"""Barcodes of grid modules and the bottleneck distance between barcodes.

Grid barcodes carry ``end = m + 1``; a bar ``[b, end)`` is still alive at the
right edge of the window and is treated as essential. Real-valued barcodes
have ``end = None`` and spell essential deaths as ``inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from ..core import INF, PreconditionError
from . import f2
from .modules import GridModule, direct_sum, interval_module


@dataclass(frozen=True)
class Barcode:
    """A sorted multiset of intervals ``[birth, death)``."""

    bars: tuple
    end: int | None = None

    def __post_init__(self):
        bars = tuple(sorted((_num(b), _num(d)) for b, d in self.bars))
        for b, d in bars:
            if not b < d:
                raise PreconditionError(f"bar [{b}, {d}) is empty")
        object.__setattr__(self, "bars", bars)

    def is_essential(self, bar) -> bool:
        d = bar[1]
        return math.isinf(d) or (self.end is not None and d >= self.end)

    @property
    def is_grid(self) -> bool:
        return self.end is not None

    def __len__(self):
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)


def _num(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return int(x) if x.is_integer() and not math.isinf(x) and abs(x) < 2 ** 53 else x


def rank_invariant(F: GridModule) -> dict:
    """``rank F(i -> j)`` for all ``i <= j``."""
    return {(i, j): f2.rank(F.map(i, j)) for i in range(F.m + 1) for j in range(i, F.m + 1)}


def barcode(F: GridModule) -> Barcode:
    """Interval multiplicities by inclusion-exclusion on the rank invariant.

    ``#[b, d) = r(b, d-1) - r(b-1, d-1) - r(b, d) + r(b-1, d)``, reading ``r``
    as zero outside the window.
    """
    m = F.m
    r = rank_invariant(F)

    def R(i, j):
        if i < 0 or j > m:
            return 0
        return r[(i, j)]

    bars = []
    for b in range(m + 1):
        for d in range(b + 1, m + 2):
            mult = R(b, d - 1) - R(b - 1, d - 1) - R(b, d) + R(b - 1, d)
            if mult < 0:
                raise AssertionError("negative interval multiplicity")
            bars += [(b, d)] * mult
    return Barcode(tuple(bars), end=m + 1)


def module_from_barcode(bc: Barcode, m: int) -> GridModule:
    return direct_sum([interval_module(b, d, m) for b, d in bc], m=m)


# -- bottleneck -------------------------------------------------------------


def _half(bar, grid: bool) -> float:
    b, d = bar
    return float(math.ceil((d - b) / 2)) if grid else (d - b) / 2


def _pair_cost(x, y) -> float:
    return max(abs(x[0] - y[0]), abs(x[1] - y[1]))


@dataclass(frozen=True)
class BottleneckResult:
    """``matching`` pairs bars of the first barcode with bars of the second by index; ``None`` is the diagonal."""

    value: float
    matching: tuple


def _feasible(A, B, eps, grid, want_matching=False):
    """Perfect matching in the bar-or-diagonal bipartite graph at threshold ``eps``."""
    n1, n2 = len(A), len(B)
    size = n1 + n2
    if size == 0:
        return True, ()
    rows, cols = [], []
    for i, x in enumerate(A):
        for j, y in enumerate(B):
            if _pair_cost(x, y) <= eps:
                rows.append(i)
                cols.append(j)
        if _half(x, grid) <= eps:
            rows.append(i)
            cols.append(n2 + i)  # i-th diagonal copy on the right
    for j, y in enumerate(B):
        if _half(y, grid) <= eps:
            rows.append(n1 + j)
            cols.append(j)
        for i in range(n1):
            rows.append(n1 + j)
            cols.append(n2 + i)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    ok = bool(np.all(match >= 0))
    if not (ok and want_matching):
        return ok, ()
    pairs = []
    for i in range(n1):
        j = int(match[i])
        pairs.append((i, j if j < n2 else None))
    for j in range(n2):
        i = int(match[n1 + j])
        if i == j:
            pairs.append((None, j))
    return ok, tuple(pairs)


def bottleneck_match(b1: Barcode, b2: Barcode) -> BottleneckResult:
    """Bottleneck distance with an optimal matching witness.

    Essential bars are matched only to essential bars, by sorted birth; a
    different number of them gives ``inf``. Finite bars go through a binary
    search over the finite set of candidate costs with a bipartite-matching
    feasibility test. Grid barcodes charge ``ceil(length / 2)`` for an
    unmatched bar, which is when its canonical shift map vanishes.
    """
    if b1.is_grid != b2.is_grid or (b1.is_grid and b1.end != b2.end):
        raise PreconditionError("barcodes come from different windows")
    grid = b1.is_grid
    E1 = [(i, x) for i, x in enumerate(b1.bars) if b1.is_essential(x)]
    E2 = [(i, x) for i, x in enumerate(b2.bars) if b2.is_essential(x)]
    if len(E1) != len(E2):
        return BottleneckResult(INF, ())
    ess = [(i, j) for (i, _), (j, _) in zip(sorted(E1, key=lambda t: t[1][0]), sorted(E2, key=lambda t: t[1][0]))]
    ess_cost = max((abs(b1.bars[i][0] - b2.bars[j][0]) for i, j in ess), default=0.0)
    F1 = [(i, x) for i, x in enumerate(b1.bars) if not b1.is_essential(x)]
    F2 = [(j, y) for j, y in enumerate(b2.bars) if not b2.is_essential(y)]
    A, B = [x for _, x in F1], [y for _, y in F2]
    cands = {0.0}
    cands.update(_half(x, grid) for x in A)
    cands.update(_half(y, grid) for y in B)
    cands.update(_pair_cost(x, y) for x in A for y in B)
    cands = sorted(c for c in cands if c >= ess_cost) or [ess_cost]
    if cands[0] > ess_cost:
        cands.insert(0, float(ess_cost))
    lo, hi = 0, len(cands) - 1  # the largest candidate is always feasible
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(A, B, cands[mid], grid)[0]:
            hi = mid
        else:
            lo = mid + 1
    value = cands[lo]
    _, local = _feasible(A, B, value, grid, want_matching=True)
    pairs = [
        (None if i is None else F1[i][0], None if j is None else F2[j][0]) for i, j in local
    ]
    pairs += ess
    value = float(max(value, ess_cost))
    return BottleneckResult(value, tuple(sorted(pairs, key=_pair_key)))


def _pair_key(p):
    i, j = p
    return (i is None, -1 if i is None else i, j is None, -1 if j is None else j)


def bottleneck(b1: Barcode, b2: Barcode) -> float:
    return bottleneck_match(b1, b2).value
