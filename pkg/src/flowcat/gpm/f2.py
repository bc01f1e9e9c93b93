"""Dense linear algebra over F2 on ``uint8`` numpy arrays."""

from __future__ import annotations

import numpy as np


def as_f2(A) -> np.ndarray:
    return np.asarray(A, dtype=np.uint8) & 1


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.uint8)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def matmul(A, B) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return (A.astype(np.int64) @ B.astype(np.int64) & 1).astype(np.uint8)


def rref(A) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = as_f2(A).copy()
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hit = np.nonzero(R[r:, c])[0]
        if hit.size == 0:
            continue
        p = r + hit[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        R[others] ^= R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A)[1])


def nullspace(A) -> np.ndarray:
    """Basis of ``{x : A x = 0}`` as rows, in reduced echelon form."""
    A = as_f2(A)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return eye(cols)
    R, pivots = rref(A)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(len(free), cols)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(pivots):
            if R[r, f]:
                basis[i, p] = 1
    return rref(basis)[0] if len(free) else basis


def solve(A, b) -> np.ndarray | None:
    """Some ``x`` with ``A x = b``, or ``None``."""
    A, b = as_f2(A), as_f2(b).reshape(-1)
    rows, cols = A.shape
    if rows == 0:
        return zeros(1, cols)[0]
    R, pivots = rref(np.concatenate([A, b[:, None]], axis=1))
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for r, p in enumerate(pivots):
        x[p] = R[r, cols]
    return x


def reduce_against(x, basis_rref, pivots) -> np.ndarray:
    """The lexicographically least element of ``x + span(basis)``.

    ``basis_rref`` must be fully reduced; clearing every pivot position gives
    the least element because each row's leading bit is its pivot.
    """
    x = as_f2(x).copy()
    for row, p in zip(basis_rref, pivots):
        if x[p]:
            x ^= row
    return x


def inverse(A) -> np.ndarray:
    A = as_f2(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, pivots = rref(np.concatenate([A, eye(n)], axis=1))
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular over F2")
    return R[:, n:].copy()


def random_invertible(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        A = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
        if rank(A) == n:
            return A


def bits_to_vector(t: int, length: int) -> np.ndarray:
    """Coefficient vector of ``t`` with index 0 as the most significant bit."""
    return np.array([(t >> (length - 1 - i)) & 1 for i in range(length)], dtype=np.uint8)


def combine(coeffs, basis) -> np.ndarray:
    coeffs = as_f2(coeffs)
    if basis.shape[0] == 0:
        return np.zeros(basis.shape[1], dtype=np.uint8)
    return (coeffs.astype(np.int64) @ basis.astype(np.int64) & 1).astype(np.uint8)
