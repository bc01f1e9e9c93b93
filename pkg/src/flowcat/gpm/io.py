"""JSON for grid modules and barcodes; CSV for barcodes."""

from __future__ import annotations

import csv
import io
import math

from ..core import PreconditionError
from ..fincat.serialize import SchemaError
from .barcode import Barcode
from .modules import GridModule


def module_to_json(F: GridModule) -> dict:
    return {"m": F.m, "dims": list(F.dims), "steps": [S.tolist() for S in F.steps]}


def module_from_json(d, path: str = "$") -> GridModule:
    if not isinstance(d, dict):
        raise SchemaError(path, "expected an object")
    for key in ("m", "dims", "steps"):
        if key not in d:
            raise SchemaError(f"{path}.{key}", "missing")
    if not isinstance(d["m"], int) or isinstance(d["m"], bool):
        raise SchemaError(f"{path}.m", "expected an integer")
    if not isinstance(d["dims"], list) or not all(isinstance(x, int) for x in d["dims"]):
        raise SchemaError(f"{path}.dims", "expected a list of integers")
    steps = d["steps"]
    if not isinstance(steps, list):
        raise SchemaError(f"{path}.steps", "expected a list of matrices")
    for i, S in enumerate(steps):
        if not isinstance(S, list) or not all(
            isinstance(row, list) and all(v in (0, 1) for v in row) for row in S
        ):
            raise SchemaError(f"{path}.steps[{i}]", "expected a list of 0/1 rows")
    try:
        return GridModule(d["m"], tuple(d["dims"]), tuple(steps))
    except (PreconditionError, ValueError) as exc:
        raise SchemaError(path, str(exc)) from None


def _bound(x):
    return "inf" if math.isinf(x) else x


def barcode_to_json(bc: Barcode) -> list:
    return [[_bound(b), _bound(d)] for b, d in bc]


def barcode_from_json(d, path: str = "$", end: int | None = None) -> Barcode:
    if not isinstance(d, list):
        raise SchemaError(path, "expected a list of [birth, death] pairs")
    bars = []
    for i, bar in enumerate(d):
        if not (isinstance(bar, list) and len(bar) == 2):
            raise SchemaError(f"{path}[{i}]", "expected a [birth, death] pair")
        try:
            b, e = (float(x) for x in bar)
        except (TypeError, ValueError):
            raise SchemaError(f"{path}[{i}]", "bounds must be numbers or 'inf'") from None
        bars.append((b, e))
    try:
        return Barcode(tuple(bars), end=end)
    except PreconditionError as exc:
        raise SchemaError(path, str(exc)) from None


def barcodes_to_csv(barcodes: dict) -> str:
    """Rows ``p,birth,death`` for each degree ``p``; essential deaths are ``inf``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "birth", "death"])
    for p in sorted(barcodes):
        for b, d in barcodes[p]:
            w.writerow([p, _bound(b), _bound(d)])
    return buf.getvalue()


def barcodes_from_csv(text: str) -> dict:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["p", "birth", "death"]:
        raise SchemaError("csv:1", "expected header p,birth,death")
    out: dict = {}
    for n, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            p, b, d = int(row[0]), float(row[1]), float(row[2])
        except (ValueError, IndexError):
            raise SchemaError(f"csv:{n}", f"bad row {row!r}") from None
        out.setdefault(p, []).append((b, d))
    return {p: Barcode(tuple(bars)) for p, bars in out.items()}
