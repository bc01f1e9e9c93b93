"""Command-line entry point: ``flowcat check | dist | laws | persist``.

Exit codes: 0 success, 1 law or stability violations, 2 unreadable input or
unknown suite, 3 an exhaustive search hit its size cap.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from .core import EpsilonGrid, PreconditionError, SizeError, format_ext
from .fincat.category import FinCat, check_fincat
from .fincat.colax import ColaxFunctor, check_colax
from .fincat.flow import GridFlow, check_flow, interleaving_search
from .fincat.serialize import SchemaError, colax_from_json, from_json
from .gpm.barcode import barcode, bottleneck_match
from .gpm.io import barcode_from_json, barcodes_to_csv, module_from_json
from .posetflow import (
    FiniteMetricSpace,
    grid_for_distances,
    hausdorff,
    linf,
    linf_by_interleaving,
    poset_interleaving,
    thicken,
)
from .rspace.io import plspace_from_json, plspace_from_off
from .rspace.persistence import persistence_barcodes, stability_check
from .rspace.spaces import dinf_witness
from .suites import SUITES, UnknownSuite, run_suite, stability_fixture

OK, VIOLATIONS, BAD_INPUT, TOO_BIG = 0, 1, 2, 3


class Run:
    """Collects inputs and results for the run report."""

    def __init__(self, argv: list[str]):
        self.argv = argv
        self.inputs: dict[str, str] = {}
        self.start = time.perf_counter()

    def read(self, path: str) -> str:
        data = Path(path).read_bytes()
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        return data.decode("utf-8")

    def load_json(self, path: str):
        text = self.read(path)
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}", exc.msg) from None

    def report(self, results, status: int) -> dict:
        return {
            "command": self.argv,
            "inputs": self.inputs,
            "results": results,
            "duration": round(time.perf_counter() - self.start, 6),
            "exit_status": status,
        }


def _emit(run: Run, args, results, status: int, summary: str | None = None) -> int:
    report = run.report(results, status)
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
        if summary is not None:
            print(summary)
    elif summary is not None and args.command in ("dist", "persist"):
        print(summary)
    else:
        print(text)
    return status


# -- check ---------------------------------------------------------------------


def cmd_check(run: Run, args) -> int:
    obj = from_json(run.load_json(args.path))
    if isinstance(obj, FinCat):
        kind, violations = "category", check_fincat(obj)
    elif isinstance(obj, GridFlow):
        kind, violations = "flow", check_flow(obj)
    elif isinstance(obj, ColaxFunctor):
        kind, violations = "colax", check_colax(obj)
    else:
        raise SchemaError("$.kind", "expected a category, flow or colax document")
    results = {"kind": kind, "violations": [v.as_dict() for v in violations], "ok": not violations}
    status = VIOLATIONS if violations else OK
    return _emit(run, args, results, status, f"{kind}: {len(violations)} violation(s)")


# -- dist ------------------------------------------------------------------------


def _grid(args, values) -> EpsilonGrid:
    delta = args.grid_delta or 1.0
    if args.grid_n:
        return EpsilonGrid(delta, args.grid_n)
    return grid_for_distances(values, delta)


def _dist_hausdorff(run, args):
    d = run.load_json(args.inputs[0])
    if "metric" in d:
        M = d["metric"]
        space = FiniteMetricSpace(tuple(M["points"]), M["dist"])
        A, B = tuple(d["A"]), tuple(d["B"])
        value = hausdorff(A, B, space)
    else:
        space = None
        A, B = d["A"], d["B"]
        value = hausdorff(A, B)
    results = {"value": format_ext(value)}
    if args.grid_delta and space is not None:
        grid = _grid(args, [space.diameter])
        leq = lambda S, R: set(S) <= set(R)
        omega = lambda e, S: thicken(S, e, space)
        results["grid_value"] = format_ext(poset_interleaving(leq, omega, frozenset(A), frozenset(B), grid))
    return value, results


def _dist_linf(run, args):
    d = run.load_json(args.inputs[0])
    a, b = d["a"], d["b"]
    value = linf(a, b)
    results = {"value": format_ext(value)}
    if args.grid_delta:
        grid = _grid(args, [value])
        results["grid_value"] = format_ext(linf_by_interleaving(a, b, grid))
    return value, results


def _load_space(run, path):
    if path.lower().endswith(".off"):
        return plspace_from_off(run.read(path))
    return plspace_from_json(run.load_json(path))


def _dist_dinf(run, args):
    X, Y = (_load_space(run, p) for p in args.inputs[:2])
    iso = dinf_witness(X, Y)
    witness = None if iso.isomorphism is None else {str(k): v for k, v in iso.isomorphism.items()}
    return iso.value, {"value": format_ext(iso.value), "isomorphism": witness}


def _dist_interleave(run, args):
    flow = from_json(run.load_json(args.inputs[0]))
    if not isinstance(flow, GridFlow):
        raise SchemaError("$.kind", "interleave needs a flow document")
    objs = list(flow.base.objects)
    rest = args.inputs[1:]
    if len(rest) == 2:
        a, b = rest
    elif len(objs) == 2 and not rest:
        a, b = objs
    else:
        raise SchemaError("$", "name the two objects to compare after the flow file")
    for x in (a, b):
        if x not in objs:
            raise SchemaError("$.category.objects", f"unknown object {x!r}")
    res = interleaving_search(flow, a, b)
    return res.value, {"a": a, "b": b, **res.as_dict()}


def _load_barcode(run, path):
    d = run.load_json(path)
    if isinstance(d, dict) and "dims" in d:
        return barcode(module_from_json(d))
    return barcode_from_json(d)


def _dist_bottleneck(run, args):
    b1, b2 = (_load_barcode(run, p) for p in args.inputs[:2])
    res = bottleneck_match(b1, b2)
    return res.value, {"value": format_ext(res.value), "matching": [list(p) for p in res.matching]}


_DIST = {
    "hausdorff": (_dist_hausdorff, 1),
    "linf": (_dist_linf, 1),
    "dinf": (_dist_dinf, 2),
    "interleave": (_dist_interleave, 1),
    "bottleneck": (_dist_bottleneck, 2),
}


def cmd_dist(run: Run, args) -> int:
    fn, need = _DIST[args.kind]
    if len(args.inputs) < need:
        raise SchemaError("argv", f"{args.kind} needs {need} input file(s)")
    value, results = fn(run, args)
    results = {"kind": args.kind, **results}
    return _emit(run, args, results, OK, format_ext(value))


# -- laws -------------------------------------------------------------------------


def cmd_laws(run: Run, args) -> int:
    if args.suite not in SUITES:
        raise UnknownSuite(f"unknown suite {args.suite!r}; expected one of {', '.join(SUITES)}")
    if args.colax:
        if args.suite != "stability":
            raise UnknownSuite("--colax applies to the stability suite only")
        cf = colax_from_json(run.load_json(args.colax))
        trial = stability_fixture(cf)
        results = {"suite": "stability", "seed": args.seed, "trials": [trial],
                   "failed": [] if trial["ok"] else [0], "ok": trial["ok"]}
    else:
        options = {}
        if args.objects is not None:
            if args.suite != "pseudometric":
                raise UnknownSuite("--objects applies to the pseudometric suite only")
            options["objects"] = args.objects
        results = run_suite(args.suite, args.seed, args.trials, jobs=args.jobs, **options)
    status = OK if results["ok"] else VIOLATIONS
    summary = f"{args.suite}: {len(results['failed'])} failing trial(s) of {len(results['trials'])}"
    return _emit(run, args, results, status, summary)


# -- persist ------------------------------------------------------------------------


def cmd_persist(run: Run, args) -> int:
    X = _load_space(run, args.path)
    if args.against:
        Y = _load_space(run, args.against)
        reports = [stability_check(X, Y, p) for p in args.degrees]
        results = {"stability": [r.as_dict() for r in reports], "ok": all(r.ok for r in reports)}
        status = OK if results["ok"] else VIOLATIONS
        summary = "\n".join(
            f"p={r.p} bottleneck={format_ext(r.bottleneck)} dinf={format_ext(r.dinf)} {'ok' if r.ok else 'VIOLATION'}"
            for r in reports
        )
        return _emit(run, args, results, status, summary)
    top = max(args.degrees)
    bcs = persistence_barcodes(X, max_degree=top)
    real = {p: bcs.real[p] for p in args.degrees}
    csv_text = barcodes_to_csv(real)
    if args.csv:
        Path(args.csv).write_text(csv_text)
    fmt = lambda bc: [[format_ext(b) if b == float("inf") else b, format_ext(d) if d == float("inf") else d] for b, d in bc]
    results = {
        "critical_values": list(bcs.values),
        "barcodes": {str(p): fmt(real[p]) for p in args.degrees},
        "grid_barcodes": {str(p): fmt(bcs.grid[p]) for p in args.degrees},
    }
    return _emit(run, args, results, OK, csv_text.rstrip("\n"))


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-delta", type=float, default=None, help="grid step for grid-valued distances")
    common.add_argument("--grid-n", type=int, default=None, help="number of grid steps")
    common.add_argument("--seed", type=int, default=None, help="seed for randomised suites")
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent trials")
    common.add_argument("--out", default=None, help="write the JSON run report here")

    p = argparse.ArgumentParser(prog="flowcat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check the laws of a category, flow or colax functor")
    c.add_argument("path")

    d = sub.add_parser("dist", parents=[common], help="compute a distance")
    d.add_argument("kind", choices=sorted(_DIST))
    d.add_argument("inputs", nargs="+", help="input files (and, for interleave, two object names)")

    l = sub.add_parser("laws", parents=[common], help="run a randomised law suite")
    l.add_argument("suite")
    l.add_argument("--colax", default=None, help="colax functor file for the stability suite")
    l.add_argument("--objects", type=int, default=None, help="objects per pseudometric trial")

    s = sub.add_parser("persist", parents=[common], help="sublevel persistence barcodes or a stability check")
    s.add_argument("path")
    s.add_argument("--degrees", type=int, nargs="+", default=[0, 1])
    s.add_argument("--against", default=None, help="second complex for a stability check")
    s.add_argument("--csv", default=None, help="write barcodes as CSV")
    return p


_COMMANDS = {"check": cmd_check, "dist": cmd_dist, "laws": cmd_laws, "persist": cmd_persist}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if args.command == "laws" and args.seed is None and not args.colax:
        print("error: randomised suites need --seed", file=sys.stderr)
        return BAD_INPUT
    run = Run(["flowcat", *argv])
    try:
        return _COMMANDS[args.command](run, args)
    except SizeError as exc:
        print(f"error: {exc} (cap {exc.cap})", file=sys.stderr)
        return _fail(run, args, {"error": "size", "message": str(exc), "cap": exc.cap}, TOO_BIG)
    except (SchemaError, UnknownSuite) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _fail(run, args, {"error": "input", "message": str(exc)}, BAD_INPUT)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _fail(run, args, {"error": "input", "message": str(exc)}, BAD_INPUT)
    except (PreconditionError, KeyError, TypeError, ValueError) as exc:
        print(f"error: input rejected: {exc}", file=sys.stderr)
        return _fail(run, args, {"error": "input", "message": str(exc)}, BAD_INPUT)


def _fail(run: Run, args, results, status: int) -> int:
    if args.out:
        Path(args.out).write_text(json.dumps(run.report(results, status), sort_keys=True, indent=2) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
