"""Persistence modules over the finite chain ``{0, ..., m}`` with F2 coefficients.

Shifts saturate at the right end: ``(F Omega_k)(i) = F(min(i + k, m))``. This
makes shifting a strict flow, so an interleaving is just a pair of natural
maps ``F -> G Omega_k`` and ``G -> F Omega_k`` whose shifted composites are the
canonical ``2k``-shift maps of ``F`` and ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..core import INF, PreconditionError, SizeError, size_cap
from . import f2


@dataclass(frozen=True, eq=False)
class GridModule:
    """``dims[i]`` is ``dim F(i)``; ``steps[i]`` is the ``dims[i+1] x dims[i]`` map ``F(i -> i+1)``."""

    m: int
    dims: tuple
    steps: tuple
    _maps: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if self.m < 0 or len(dims) != self.m + 1 or any(d < 0 for d in dims):
            raise PreconditionError(f"need m + 1 = {self.m + 1} nonnegative dimensions, got {dims}")
        if len(self.steps) != self.m:
            raise PreconditionError(f"need {self.m} step maps, got {len(self.steps)}")
        steps = []
        for i, S in enumerate(self.steps):
            S = f2.as_f2(S)
            if S.size == 0:
                # Empty matrices arrive as [] or [[]]; only the shape matters.
                S = f2.zeros(dims[i + 1], dims[i])
            if S.shape != (dims[i + 1], dims[i]):
                raise PreconditionError(f"step {i} has shape {S.shape}, expected {(dims[i + 1], dims[i])}")
            S.setflags(write=False)
            steps.append(S)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "steps", tuple(steps))

    def map(self, i: int, j: int) -> np.ndarray:
        """The structure map ``F(i -> j)`` for ``i <= j``."""
        if not 0 <= i <= j <= self.m:
            raise PreconditionError(f"no structure map {i} -> {j} on 0..{self.m}")
        key = (i, j)
        if key not in self._maps:
            M = f2.eye(self.dims[i]) if i == j else f2.matmul(self.steps[j - 1], self.map(i, j - 1))
            M.setflags(write=False)
            self._maps[key] = M
        return self._maps[key]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def __eq__(self, other):
        if not isinstance(other, GridModule):
            return NotImplemented
        return (
            self.m == other.m
            and self.dims == other.dims
            and all(np.array_equal(a, b) for a, b in zip(self.steps, other.steps))
        )

    def __hash__(self):
        return hash((self.m, self.dims, tuple(s.tobytes() for s in self.steps)))

    def __repr__(self):
        return f"GridModule(m={self.m}, dims={self.dims})"


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """A family of matrices ``components[i]: source(i) -> target(i)``."""

    source: GridModule
    target: GridModule
    components: tuple

    def __post_init__(self):
        if self.source.m != self.target.m:
            raise PreconditionError("module map between different grids")
        comps = []
        for i, c in enumerate(self.components):
            c = f2.as_f2(c).reshape(self.target.dims[i], self.source.dims[i])
            c.setflags(write=False)
            comps.append(c)
        if len(comps) != self.source.m + 1:
            raise PreconditionError("one component per grid index is required")
        object.__setattr__(self, "components", tuple(comps))

    def is_natural(self) -> bool:
        F, G, c = self.source, self.target, self.components
        return all(
            np.array_equal(f2.matmul(G.steps[i], c[i]), f2.matmul(c[i + 1], F.steps[i]))
            for i in range(F.m)
        )

    def after(self, other: "ModuleMap") -> "ModuleMap":
        """``self o other``."""
        return ModuleMap(
            other.source, self.target,
            tuple(f2.matmul(a, b) for a, b in zip(self.components, other.components)),
        )

    def key(self) -> bytes:
        return b"|".join(c.tobytes() for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.components, other.components))

    def __hash__(self):
        return hash(self.key())


def zero_module(m: int) -> GridModule:
    return GridModule(m, (0,) * (m + 1), tuple(f2.zeros(0, 0) for _ in range(m)))


def interval_module(b: int, d: int, m: int) -> GridModule:
    """``I[b, d)``: F2 on ``b <= i < d`` with identity steps; ``d = m + 1`` means alive at the end."""
    if not 0 <= b < d <= m + 1:
        raise PreconditionError(f"interval [{b},{d}) does not fit 0..{m}")
    dims = tuple(1 if b <= i < d else 0 for i in range(m + 1))
    steps = tuple(f2.as_f2(np.ones((dims[i + 1], dims[i]))) for i in range(m))
    return GridModule(m, dims, steps)


def direct_sum(mods: Sequence[GridModule], m: int | None = None) -> GridModule:
    if not mods:
        if m is None:
            raise PreconditionError("empty direct sum needs the grid length")
        return zero_module(m)
    m = mods[0].m
    if any(F.m != m for F in mods):
        raise PreconditionError("direct sum of modules on different grids")
    dims = tuple(sum(F.dims[i] for F in mods) for i in range(m + 1))
    steps = []
    for i in range(m):
        S = f2.zeros(dims[i + 1], dims[i])
        r = c = 0
        for F in mods:
            S[r:r + F.dims[i + 1], c:c + F.dims[i]] = F.steps[i]
            r, c = r + F.dims[i + 1], c + F.dims[i]
        steps.append(S)
    return GridModule(m, dims, tuple(steps))


def change_basis(F: GridModule, bases: Sequence[np.ndarray]) -> GridModule:
    """The isomorphic module with steps ``P[i+1] S[i] P[i]^-1``."""
    inv = [f2.inverse(P) if P.size else P for P in bases]
    steps = tuple(
        f2.matmul(f2.matmul(bases[i + 1], F.steps[i]), inv[i]) for i in range(F.m)
    )
    return GridModule(F.m, F.dims, steps)


def shift_index(i: int, k: int, m: int) -> int:
    return min(i + k, m)


def shift_module(F: GridModule, k: int) -> GridModule:
    """``F Omega_k``; steps past the right end are identities."""
    if k < 0:
        raise PreconditionError("shift must be nonnegative")
    m = F.m
    dims = tuple(F.dims[shift_index(i, k, m)] for i in range(m + 1))
    steps = tuple(F.map(shift_index(i, k, m), shift_index(i + 1, k, m)) for i in range(m))
    return GridModule(m, dims, steps)


def canonical_map(F: GridModule, k: int) -> ModuleMap:
    """The natural map ``F => F Omega_k`` given by the structure maps ``F(i -> min(i+k, m))``."""
    m = F.m
    return ModuleMap(
        F, shift_module(F, k), tuple(F.map(i, shift_index(i, k, m)) for i in range(m + 1))
    )


def shift_map(phi: ModuleMap, k: int) -> ModuleMap:
    """``phi Omega_k``: the components of ``phi`` re-indexed along the shift."""
    m = phi.source.m
    return ModuleMap(
        shift_module(phi.source, k),
        shift_module(phi.target, k),
        tuple(phi.components[shift_index(i, k, m)] for i in range(m + 1)),
    )


def identity_map(F: GridModule) -> ModuleMap:
    return ModuleMap(F, F, tuple(f2.eye(d) for d in F.dims))


def zero_map(F: GridModule, G: GridModule) -> ModuleMap:
    return ModuleMap(F, G, tuple(f2.zeros(G.dims[i], F.dims[i]) for i in range(F.m + 1)))


# -- spaces of natural maps -------------------------------------------------


@dataclass(frozen=True)
class HomSpace:
    """All natural maps ``source -> target`` as the span of ``basis`` (rows, echelon form)."""

    source: GridModule
    target: GridModule
    basis: np.ndarray
    offsets: tuple

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def from_vector(self, x) -> ModuleMap:
        F, G = self.source, self.target
        comps = []
        for i in range(F.m + 1):
            a, b = self.offsets[i], self.offsets[i + 1]
            comps.append(np.asarray(x[a:b], dtype=np.uint8).reshape(G.dims[i], F.dims[i]))
        return ModuleMap(F, G, tuple(comps))

    def element(self, coeffs) -> ModuleMap:
        return self.from_vector(f2.combine(coeffs, self.basis))

    def elements(self):
        """Every natural map, in increasing coefficient order (index 0 most significant)."""
        p = self.dim
        for t in range(2 ** p):
            yield self.element(f2.bits_to_vector(t, p))


def hom_space(F: GridModule, G: GridModule) -> HomSpace:
    """Solve ``G.step(i) X_i = X_{i+1} F.step(i)`` for all ``i`` as one F2 nullspace."""
    if F.m != G.m:
        raise PreconditionError("modules live on different grids")
    m = F.m
    sizes = [G.dims[i] * F.dims[i] for i in range(m + 1)]
    offsets = tuple(int(x) for x in np.concatenate([[0], np.cumsum(sizes)]))
    nvar = offsets[-1]
    rows = []
    for i in range(m):
        fi, fj, gi, gj = F.dims[i], F.dims[i + 1], G.dims[i], G.dims[i + 1]
        Sg, Sf = G.steps[i], F.steps[i]
        for r in range(gj):
            for c in range(fi):
                row = np.zeros(nvar, dtype=np.uint8)
                # (Sg X_i)[r, c] = sum_s Sg[r, s] X_i[s, c]
                for s in range(gi):
                    if Sg[r, s]:
                        row[offsets[i] + s * fi + c] ^= 1
                # (X_{i+1} Sf)[r, c] = sum_t X_{i+1}[r, t] Sf[t, c]
                for t in range(fj):
                    if Sf[t, c]:
                        row[offsets[i + 1] + r * fj + t] ^= 1
                rows.append(row)
    A = np.array(rows, dtype=np.uint8).reshape(len(rows), nvar)
    basis = f2.nullspace(A) if nvar else f2.zeros(0, 0)
    return HomSpace(F, G, basis, offsets)


# -- interleavings ------------------------------------------------------------


def _check_pair(F: GridModule, G: GridModule, k: int) -> None:
    if F.m != G.m:
        raise PreconditionError("modules live on different grids")
    if int(k) != k or k < 0:
        raise PreconditionError(f"shift must be a nonnegative integer, got {k}")


def check_omega_interleaving(F, G, k: int, phi: ModuleMap, psi: ModuleMap) -> bool:
    """Both triangles: ``psi Omega_k o phi`` and ``phi Omega_k o psi`` are the canonical ``2k`` maps."""
    _check_pair(F, G, k)
    m = F.m
    if phi.source != F or phi.target != shift_module(G, k):
        raise PreconditionError("phi must be a map F -> G Omega_k")
    if psi.source != G or psi.target != shift_module(F, k):
        raise PreconditionError("psi must be a map G -> F Omega_k")
    for i in range(m + 1):
        j, jj = shift_index(i, k, m), shift_index(i, 2 * k, m)
        if not np.array_equal(f2.matmul(psi.components[j], phi.components[i]), F.map(i, jj)):
            return False
        if not np.array_equal(f2.matmul(phi.components[j], psi.components[i]), G.map(i, jj)):
            return False
    return True


def _triangle_system(F, G, k, phi: ModuleMap, psi_space: HomSpace):
    """Linear system in the coefficients of ``psi`` expressing both triangles for a fixed ``phi``.

    Both conditions are linear in ``psi`` once ``phi`` is fixed, and the roles
    of the two maps are symmetric, so the same routine serves either side.
    """
    m = F.m
    cols = []
    for t in range(psi_space.dim):
        psi = psi_space.from_vector(psi_space.basis[t])
        parts = []
        for i in range(m + 1):
            j = shift_index(i, k, m)
            parts.append(f2.matmul(psi.components[j], phi.components[i]).reshape(-1))
            parts.append(f2.matmul(phi.components[j], psi.components[i]).reshape(-1))
        cols.append(np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8))
    rhs = []
    for i in range(m + 1):
        jj = shift_index(i, 2 * k, m)
        rhs.append(F.map(i, jj).reshape(-1))
        rhs.append(G.map(i, jj).reshape(-1))
    b = np.concatenate(rhs).astype(np.uint8)
    A = np.array(cols, dtype=np.uint8).T.reshape(len(b), psi_space.dim)
    return A, b


def _lex_least_solution(A, b):
    x = f2.solve(A, b)
    if x is None:
        return None
    N = f2.nullspace(A)
    if N.shape[0] == 0:
        return x
    R, piv = f2.rref(N)
    return f2.reduce_against(x, R[: len(piv)], piv)


def _first_pair(F, G, k, outer: HomSpace, inner: HomSpace):
    p = outer.dim
    # The system is linear in the outer map, so A(x) is the XOR of the systems
    # of x's basis components; stepping t -> t + 1 flips few of them.
    parts = [_triangle_system(F, G, k, outer.from_vector(outer.basis[s]), inner)[0] for s in range(p)]
    A, b = _triangle_system(F, G, k, zero_map(outer.source, outer.target), inner)
    A = A.copy()
    for t in range(2 ** p):
        if t:
            flipped = t ^ (t - 1)
            for s in range(p):
                if flipped >> (p - 1 - s) & 1:
                    A ^= parts[s]
        c = _lex_least_solution(A, b)
        if c is not None:
            return outer.element(f2.bits_to_vector(t, p)), inner.element(c)
    return None


def find_omega_interleaving(F: GridModule, G: GridModule, k: int, order: str = "auto"):
    """A pair ``(phi, psi)`` satisfying both triangles, or ``None``.

    One map is enumerated over its solution space in coefficient order; for
    each value the triangle conditions are linear in the other, whose least
    solution is read off an affine solve. With ``order="phi"`` the result is the
    first hit of the pairwise scan in ``(phi, psi)`` order; ``order="auto"``
    enumerates whichever space is smaller and is lexicographic in that order.
    """
    _check_pair(F, G, k)
    cap = size_cap(2 ** 16)
    Phi = hom_space(F, shift_module(G, k))
    Psi = hom_space(G, shift_module(F, k))
    swap = order == "psi" or (order == "auto" and Psi.dim < Phi.dim)
    outer = Psi if swap else Phi
    if 2 ** outer.dim > cap:
        raise SizeError(f"2^{outer.dim} candidate maps exceed the cap of {cap}", cap)
    if swap:
        hit = _first_pair(G, F, k, Psi, Phi)
        return None if hit is None else (hit[1], hit[0])
    return _first_pair(F, G, k, Phi, Psi)


def brute_force_omega_interleaving(F: GridModule, G: GridModule, k: int):
    """Pairwise scan over both solution spaces; the oracle for :func:`find_omega_interleaving`."""
    _check_pair(F, G, k)
    cap = size_cap(2 ** 16)
    Phi = hom_space(F, shift_module(G, k))
    Psi = hom_space(G, shift_module(F, k))
    if 2 ** Phi.dim > cap or 2 ** Psi.dim > cap:
        raise SizeError(f"2^{max(Phi.dim, Psi.dim)} candidate maps exceed the cap of {cap}", cap)
    psis = list(Psi.elements())
    for phi in Phi.elements():
        for psi in psis:
            if check_omega_interleaving(F, G, k, phi, psi):
                return phi, psi
    return None


@dataclass(frozen=True)
class OmegaResult:
    value: float
    index: int | None
    witness: tuple | None


def omega_search(F: GridModule, G: GridModule, finder=find_omega_interleaving) -> OmegaResult:
    """Scan ``k = 0..m``; shifts by ``k >= m`` all coincide, so failure at ``m`` means never."""
    _check_pair(F, G, 0)
    for k in range(F.m + 1):
        w = finder(F, G, k)
        if w is not None:
            return OmegaResult(float(k), k, w)
    return OmegaResult(INF, None, None)


def omega_distance(F: GridModule, G: GridModule) -> float:
    """Interleaving distance for the saturated shift, in grid units."""
    return omega_search(F, G).value


def random_module(rng: np.random.Generator, m: int, max_dim: int = 2, total: int | None = None) -> GridModule:
    """Random dimensions and random step matrices; every such module is interval decomposable."""
    while True:
        dims = tuple(int(d) for d in rng.integers(0, max_dim + 1, size=m + 1))
        if total is None or sum(dims) <= total:
            break
    steps = tuple(rng.integers(0, 2, size=(dims[i + 1], dims[i]), dtype=np.uint8) for i in range(m))
    return GridModule(m, dims, steps)
