"""Randomised law suites behind ``flowcat laws``.

Every trial draws from its own generator ``default_rng([seed, trial])`` so a
trial's outcome depends only on the seed and its index, whatever the
scheduling. A trial returns a JSON-ready dict with at least ``trial`` and
``ok``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np

from .core import check_pseudometric, ext_le, format_ext
from .fincat.colax import ColaxFunctor, check_colax, compose_colax, verify_lipschitz
from .fincat.flow import interleaving_distance
from .fincat.generators import random_colax, random_composable, random_flow
from .gpm.barcode import Barcode, barcode, bottleneck
from .gpm.category import ModuleCategory, draw_comparison_pair, module_flow, weak_vs_omega
from .gpm.modules import omega_distance, random_module
from .posetflow import FiniteMetricSpace, grid_for_distances, hausdorff, linf, materialize_poset_flow
from .rspace.persistence import random_complex
from .rspace.spaces import PLSpace, dinf

SUITES = ("pseudometric", "stability", "comparison", "functoriality")
FAMILIES = ("fincat", "poset", "hausdorff", "linf", "dinf", "bottleneck", "omega")


class UnknownSuite(ValueError):
    pass


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


# -- pseudometric -------------------------------------------------------------


def _random_space(rng, n: int) -> FiniteMetricSpace:
    pts = rng.integers(0, 6, size=(n, 2))
    while len({tuple(p) for p in pts}) < n:
        pts = rng.integers(0, 6, size=(n, 2))
    return FiniteMetricSpace.from_coordinates(pts, ids=[f"p{i}" for i in range(n)])


def _random_barcode(rng) -> Barcode:
    bars = []
    for _ in range(int(rng.integers(0, 5))):
        b = float(np.round(rng.uniform(0, 5), 3))
        bars.append((b, b + float(np.round(rng.uniform(0.1, 4), 3))))
    bars += [(float(np.round(rng.uniform(0, 2), 3)), math.inf)] * int(rng.integers(1, 3))
    return Barcode(tuple(bars))


def family_sample(family: str, rng: np.random.Generator, count: int):
    """``(dist, samples, tol, cap)`` for one distance family."""
    if family == "fincat":
        flow = random_flow(rng)
        cap = flow.grid.value(flow.grid.half)
        return (lambda a, b: interleaving_distance(flow, a, b)), list(flow.base.objects), 0.0, cap
    if family == "poset":
        space = _random_space(rng, 6)
        grid = grid_for_distances([space.diameter], 1.0)
        flow = materialize_poset_flow("thicken", space, grid)
        objs = list(flow.base.objects)
        picks = [objs[i] for i in rng.choice(len(objs), size=min(count, len(objs)), replace=False)]
        cap = grid.value(grid.half)
        return (lambda a, b: interleaving_distance(flow, a, b)), picks, 0.0, cap
    if family == "hausdorff":
        space = _random_space(rng, 8)
        subsets = []
        while len(subsets) < count:
            mask = rng.integers(0, 2, size=8).astype(bool)
            if mask.any():
                subsets.append(tuple(p for p, keep in zip(space.points, mask) if keep))
        return (lambda a, b: hausdorff(a, b, space)), subsets, 1e-9, None
    if family == "linf":
        vecs = [tuple(rng.uniform(-5, 5, size=3)) for _ in range(count)]
        return linf, vecs, 1e-9, None
    if family == "dinf":
        bases = [random_complex(rng, int(rng.integers(3, 6))) for _ in range(3)]
        spaces = []
        for _ in range(count):
            K = bases[int(rng.integers(len(bases)))]
            verts = [s[0] for s in K if len(s) == 1]
            spaces.append(PLSpace(K, {v: float(rng.integers(0, 6)) for v in verts}))
        return dinf, spaces, 1e-9, None
    if family == "bottleneck":
        return bottleneck, [_random_barcode(rng) for _ in range(count)], 1e-9, None
    if family == "omega":
        mods = [random_module(rng, 3, 2) for _ in range(count)]
        return omega_distance, mods, 0.0, None
    raise ValueError(f"unknown distance family {family!r}")


def pseudometric_trial(seed: int, trial: int, objects: int = 8, family: str | None = None) -> dict:
    rng = trial_rng(seed, trial)
    family = family or FAMILIES[trial % len(FAMILIES)]
    dist, samples, tol, cap = family_sample(family, rng, objects)
    report = check_pseudometric(dist, samples, tol=tol, cap=cap)
    return {"trial": trial, "family": family, "objects": len(samples), "ok": report.ok, **report.as_dict()}


# -- stability ------------------------------------------------------------------


def _object_pairs(rng, objects, count: int) -> list:
    objs = list(objects)
    return [tuple(objs[i] for i in rng.integers(len(objs), size=2)) for _ in range(count)]


def stability_trial(seed: int, trial: int, pairs: int = 5) -> dict:
    rng = trial_rng(seed, trial)
    cf = random_colax(rng).build()
    law = check_colax(cf)
    chosen = _object_pairs(rng, cf.source.base.objects, pairs)
    lip = verify_lipschitz(cf, chosen)
    return {
        "trial": trial,
        "colax_violations": [v.as_dict() for v in law],
        **lip.as_dict(),
        "ok": not law and lip.ok,
    }


def stability_fixture(cf: ColaxFunctor) -> dict:
    """Check one given colax functor on every ordered pair of distinct objects."""
    law = check_colax(cf)
    objs = cf.source.base.objects
    lip = verify_lipschitz(cf, [(a, b) for a in objs for b in objs if a != b])
    return {
        "trial": 0,
        "colax_violations": [v.as_dict() for v in law],
        **lip.as_dict(),
        "ok": not law and lip.ok,
    }


# -- comparison -------------------------------------------------------------------


def comparison_trial(seed: int, trial: int) -> dict:
    rng = trial_rng(seed, trial)
    F, G, rejected = draw_comparison_pair(rng)
    flow = module_flow(ModuleCategory({"F": F, "G": G}, hom_cap=2 ** 10))
    rows = [weak_vs_omega(F, G, k, flow) for k in range(F.m + 1)]
    first = next((r["k"] for r in rows if r["omega"]), None)
    d_omega = math.inf if first is None else float(first)
    d_fast = bottleneck(barcode(F), barcode(G))
    laws_ok = all(r["implication"] and r["equivalent"] for r in rows)
    return {
        "trial": trial,
        "m": F.m,
        "dims": [list(F.dims), list(G.dims)],
        "rejected_draws": rejected,
        "rows": rows,
        "d_omega": format_ext(d_omega),
        "bottleneck": format_ext(d_fast),
        "ok": laws_ok and d_fast == d_omega,
    }


# -- functoriality ------------------------------------------------------------------


def functoriality_trial(seed: int, trial: int, pairs: int = 3) -> dict:
    rng = trial_rng(seed, trial)
    f_spec, g_spec = random_composable(rng)
    f = f_spec.build()
    g = g_spec.build(source=f.target)
    gf = compose_colax(f, g)
    law = check_colax(gf)
    rows = []
    ok = not law
    for a, b in _object_pairs(rng, f.source.base.objects, pairs):
        d0 = interleaving_distance(f.source, a, b)
        fa, fb = f.H.ob(a), f.H.ob(b)
        d1 = interleaving_distance(f.target, fa, fb)
        d2 = interleaving_distance(g.target, g.H.ob(fa), g.H.ob(fb))
        chained = ext_le(d2, d1) and ext_le(d1, d0)
        ok &= chained
        rows.append({"a": a, "b": b, "d": [format_ext(d0), format_ext(d1), format_ext(d2)], "ok": chained})
    lip = verify_lipschitz(gf, [(r["a"], r["b"]) for r in rows])
    ok &= lip.ok
    return {
        "trial": trial,
        "composite_violations": [v.as_dict() for v in law],
        "rows": rows,
        "composite_lipschitz": lip.as_dict(),
        "ok": ok,
    }


_TRIALS: dict[str, Callable] = {
    "pseudometric": pseudometric_trial,
    "stability": stability_trial,
    "comparison": comparison_trial,
    "functoriality": functoriality_trial,
}


def _run(args):
    suite, seed, trial, options = args
    return _TRIALS[suite](seed, trial, **options)


def run_suite(suite: str, seed: int, trials: int, jobs: int = 1, **options) -> dict:
    """Run ``trials`` independent trials; results are ordered by trial index."""
    if suite not in _TRIALS:
        raise UnknownSuite(f"unknown suite {suite!r}; expected one of {SUITES}")
    work = [(suite, seed, i, options) for i in range(trials)]
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run, work))
    else:
        results = [_run(w) for w in work]
    failed = [r["trial"] for r in results if not r["ok"]]
    return {"suite": suite, "seed": seed, "trials": results, "failed": failed, "ok": not failed}
