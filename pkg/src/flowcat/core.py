"""Extended reals, epsilon grids and the pseudometric harness.

Distances live in ``[0, inf]`` and are plain Python floats with ``math.inf``
as the top element; :func:`as_ext` validates a value on the way in.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Sequence

ExtReal = float
INF: ExtReal = math.inf

#: Absolute tolerance used for real-valued comparisons.
TOL = 1e-9


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class SizeError(RuntimeError):
    """An exhaustive search would exceed its configured cap."""

    def __init__(self, message: str, cap: int | None = None):
        super().__init__(message)
        self.cap = cap


def size_cap(default: int) -> int:
    """Return ``default`` unless ``FLOWCAT_SIZE_CAP`` overrides it."""
    raw = os.environ.get("FLOWCAT_SIZE_CAP")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise PreconditionError(f"FLOWCAT_SIZE_CAP must be an integer, got {raw!r}")
    if value <= 0:
        raise PreconditionError("FLOWCAT_SIZE_CAP must be positive")
    return value


def as_ext(x: float) -> ExtReal:
    """Coerce ``x`` to an extended nonnegative real, rejecting NaN and negatives."""
    x = float(x)
    if math.isnan(x) or x < 0:
        raise ValueError(f"not an extended nonnegative real: {x!r}")
    return x


def ext_add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Sum in ``[0, inf]``; infinity is absorbing."""
    if math.isinf(a) or math.isinf(b):
        return INF
    return a + b


def ext_le(a: ExtReal, b: ExtReal, tol: float = 0.0) -> bool:
    """``a <= b`` in ``[0, inf]`` with an optional slack on finite values."""
    if math.isinf(b):
        return True
    if math.isinf(a):
        return False
    return a <= b + tol


def format_ext(x: ExtReal) -> str:
    """Render with 12 significant digits; infinity is spelled ``inf``."""
    if math.isinf(x):
        return "inf"
    s = f"{x:.12g}"
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


@dataclass(frozen=True)
class EpsilonGrid:
    """The grid ``{0, delta, 2*delta, ..., n*delta}`` standing in for ``[0, inf)``.

    Index arithmetic ``j + k`` is only meaningful while ``j + k <= n``.
    """

    delta: float
    n: int

    def __post_init__(self):
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise PreconditionError(f"grid step must be positive, got {self.delta}")
        if int(self.n) != self.n or self.n < 1:
            raise PreconditionError(f"grid count must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    def value(self, k: int) -> float:
        self.check_index(k)
        return k * self.delta

    def check_index(self, k: int) -> None:
        if not 0 <= k <= self.n:
            raise PreconditionError(f"grid index {k} outside 0..{self.n}")

    def add(self, j: int, k: int) -> int:
        self.check_index(j + k)
        return j + k

    def indices(self) -> range:
        return range(self.n + 1)

    @property
    def half(self) -> int:
        """Largest index ``k`` with ``2k <= n``: the interleaving search range."""
        return self.n // 2


@dataclass
class MetricReport:
    """Violations of the pseudometric axioms found on a finite sample."""

    pairs_checked: int = 0
    triples_checked: int = 0
    domain: list = field(default_factory=list)
    reflexivity: list = field(default_factory=list)
    symmetry: list = field(default_factory=list)
    triangle: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.domain or self.reflexivity or self.symmetry or self.triangle)

    def as_dict(self) -> dict:
        def clean(rows):
            return [[_jsonable(v) for v in row] for row in rows]

        return {
            "pairs_checked": self.pairs_checked,
            "triples_checked": self.triples_checked,
            "domain": clean(self.domain),
            "reflexivity": clean(self.reflexivity),
            "symmetry": clean(self.symmetry),
            "triangle": clean(self.triangle),
            "ok": self.ok,
        }


def _jsonable(v: Any):
    if isinstance(v, float):
        return format_ext(v) if math.isinf(v) else v
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return repr(v)


def check_pseudometric(
    dist: Callable[[Any, Any], float],
    samples: Sequence[Any],
    tol: float = 0.0,
    cap: float | None = None,
) -> MetricReport:
    """Check reflexivity, symmetry and the triangle inequality on ``samples``.

    ``dist`` is evaluated once per ordered pair. Values that are negative or NaN
    are recorded as domain violations and excluded from the other checks.
    When ``cap`` is given, triangle instances whose right-hand side exceeds it
    are skipped: a capped search cannot certify distances beyond its range.
    """
    report = MetricReport()
    n = len(samples)
    d = [[0.0] * n for _ in range(n)]
    bad = set()
    for i, j in product(range(n), repeat=2):
        v = float(dist(samples[i], samples[j]))
        report.pairs_checked += 1
        if math.isnan(v) or v < 0:
            report.domain.append((i, j, v))
            bad.add((i, j))
        d[i][j] = v

    for i in range(n):
        if (i, i) not in bad and abs(d[i][i]) > tol:
            report.reflexivity.append((i, d[i][i]))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in bad or (j, i) in bad:
                continue
            a, b = d[i][j], d[j][i]
            if math.isinf(a) != math.isinf(b) or (not math.isinf(a) and abs(a - b) > tol):
                report.symmetry.append((i, j, a, b))
    for i, j, k in product(range(n), repeat=3):
        if {(i, k), (i, j), (j, k)} & bad:
            continue
        rhs = ext_add(d[i][j], d[j][k])
        if cap is not None and rhs > cap + tol:
            continue
        report.triples_checked += 1
        if not ext_le(d[i][k], rhs, tol):
            report.triangle.append((i, j, k, d[i][k], rhs))
    return report
