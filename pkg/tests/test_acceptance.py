"""Acceptance criteria, one test each; the terminal summary prints a line per criterion."""

import functools
import itertools
import time
from contextlib import contextmanager

import numpy as np

from flowcat.core import EpsilonGrid, check_pseudometric
from flowcat.fincat.category import check_fincat
from flowcat.fincat.flow import check_flow, interleaving_distance
from flowcat.fincat.generators import mutate_flow, random_flow
from flowcat.posetflow import (
    FiniteMetricSpace,
    grid_for_distances,
    hausdorff,
    linf,
    linf_by_interleaving,
    materialize_poset_flow,
    subset_name,
)
from flowcat.rspace.homology import euler_characteristic, homology_basis
from flowcat.rspace.persistence import perturb, random_plspace, stability_check, sublevel_filtration
from flowcat.suites import comparison_trial, family_sample, functoriality_trial, stability_trial

SEED = 20240601


@contextmanager
def criterion(record_property, n: int, title: str, budget: float):
    record_property("criterion", n)
    record_property("title", title)
    info = {}
    start = time.perf_counter()
    yield info
    elapsed = time.perf_counter() - start
    info["time"] = f"{elapsed:.2f}s/<{budget:g}s"
    record_property("detail", " ".join(f"{k}={v}" for k, v in info.items()))
    assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"


def test_criterion_01_flow_laws(record_property):
    with criterion(record_property, 1, "flow laws and mutation detection", 5.0) as info:
        rng = np.random.default_rng([SEED, 1])
        flows = [random_flow(rng, max_objects=5, n=6, max_hom=8) for _ in range(50)]
        assert all(len(f.base.objects) <= 5 for f in flows)
        clean = sum(not check_fincat(f.base) and not check_flow(f) for f in flows)
        detected = 0
        mutated = 0
        pool = itertools.cycle(f for f in flows if len(f.base.morphisms) > 1)
        while mutated < 50:
            broken, *_ = mutate_flow(rng, next(pool))
            mutated += 1
            detected += bool(check_fincat(broken.base) or check_flow(broken))
        info.update(clean=f"{clean}/50", detected=f"{detected}/50")
        assert clean == 50 and detected == 50


def test_criterion_02_pseudometrics(record_property):
    with criterion(record_property, 2, "pseudometric axioms per family", 10.0) as info:
        bad = []
        for family in ("poset", "hausdorff", "linf", "dinf", "bottleneck"):
            dist, samples, tol, cap = family_sample(family, np.random.default_rng([SEED, 2]), 50)
            rep = check_pseudometric(dist, samples, tol=tol, cap=cap)
            found = len(rep.domain) + len(rep.reflexivity) + len(rep.symmetry) + len(rep.triangle)
            info[family] = f"{len(samples)}obj/{rep.triples_checked}tri/{found}v"
            if len(samples) < 50 or not rep.ok:
                bad.append(family)
        assert not bad, bad


def _integer_metric_space(rng, size: int) -> FiniteMetricSpace:
    # Shortest paths on a complete graph with integer weights give integer distances.
    W = rng.integers(1, 5, size=(size, size))
    D = np.minimum(W, W.T).astype(float)
    np.fill_diagonal(D, 0)
    for k in range(size):
        D = np.minimum(D, D[:, [k]] + D[[k], :])
    return FiniteMetricSpace(tuple(f"q{i}" for i in range(size)), D)


def test_criterion_03_hausdorff_equality(record_property):
    with criterion(record_property, 3, "Hausdorff equals materialised interleaving", 5.0) as info:
        rng = np.random.default_rng([SEED, 3])
        pairs = mismatches = 0
        for _ in range(3):
            space = _integer_metric_space(rng, 4)
            grid = grid_for_distances([space.diameter], 1.0)
            flow = materialize_poset_flow("hausdorff", space, grid)
            subsets = [frozenset(c) for r in range(1, 5) for c in itertools.combinations(space.points, r)]
            for A, B in itertools.product(subsets, repeat=2):
                pairs += 1
                d = interleaving_distance(flow, subset_name(A, space), subset_name(B, space))
                mismatches += d != hausdorff(A, B, space)
        info.update(pairs=pairs, mismatches=mismatches)
        assert pairs == 3 * 15 * 15 and mismatches == 0


def test_criterion_04_linf_equality(record_property):
    with criterion(record_property, 4, "L-infinity equals grid interleaving", 5.0) as info:
        rng = np.random.default_rng([SEED, 4])
        grid = EpsilonGrid(1e-3, 40_000)
        worst = 0.0
        for _ in range(500):
            a, b = rng.uniform(-10, 10, size=(2, 3))
            worst = max(worst, abs(linf(a, b) - linf_by_interleaving(a, b, grid)))
        info["max_error"] = f"{worst:.2e}"
        assert worst <= 1e-3


@functools.lru_cache(maxsize=None)
def comparison_corpus():
    return tuple(comparison_trial(SEED, i) for i in range(200))


def test_criterion_05_weak_equals_omega(record_property):
    with criterion(record_property, 5, "Omega-interleaving iff weak interleaving", 60.0) as info:
        rows = comparison_corpus()
        checks = sum(len(r["rows"]) for r in rows)
        bad = [r["trial"] for r in rows if not all(x["implication"] and x["equivalent"] for x in r["rows"])]
        info.update(pairs=len(rows), index_checks=checks, rejected=sum(r["rejected_draws"] for r in rows),
                    disagreements=len(bad))
        assert len(rows) == 200 and not bad
        assert all(sum(r["dims"][0]) + sum(r["dims"][1]) <= 12 and r["m"] <= 4 for r in rows)


def test_criterion_06_bottleneck_fast_path(record_property):
    with criterion(record_property, 6, "bottleneck of barcodes equals Omega distance", 60.0) as info:
        rows = comparison_corpus()
        bad = [r["trial"] for r in rows if r["bottleneck"] != r["d_omega"]]
        info.update(pairs=len(rows), mismatches=len(bad), corpus="shared with 5")
        assert not bad


def test_criterion_07_colax_stability(record_property):
    with criterion(record_property, 7, "colax functors are 1-Lipschitz", 30.0) as info:
        trials = [stability_trial(SEED, i, pairs=5) for i in range(20)]
        pairs = sum(len(t["rows"]) for t in trials)
        law = sum(len(t["colax_violations"]) for t in trials)
        lip = sum(len(t["violations"]) for t in trials)
        info.update(functors=len(trials), pairs=pairs, law_violations=law, lipschitz_violations=lip)
        assert pairs == 100 and law == 0 and lip == 0


@functools.lru_cache(maxsize=None)
def persistence_corpus():
    rng = np.random.default_rng([SEED, 8])
    corpus = []
    for _ in range(100):
        X = random_plspace(rng, int(rng.integers(5, 31)), edge_p=0.25)
        corpus.append((X, perturb(rng, X, float(rng.uniform(0.01, 1.0)))))
    return tuple(corpus)


def test_criterion_08_persistence_stability(record_property):
    with criterion(record_property, 8, "sublevel persistence is 1-Lipschitz", 10.0) as info:
        corpus = persistence_corpus()
        assert max(len(X.vertices) for X, _ in corpus) <= 30
        bad = 0
        for X, Y in corpus:
            for p in (0, 1):
                bad += not stability_check(X, Y, p).ok
        info.update(pairs=len(corpus), degrees="0,1", violations=bad)
        assert bad == 0


def test_criterion_09_functoriality(record_property):
    with criterion(record_property, 9, "composites of colax functors", 10.0) as info:
        trials = [functoriality_trial(SEED, i) for i in range(50)]
        bad = [t["trial"] for t in trials if not t["ok"]]
        info.update(pairs=len(trials), failures=len(bad))
        assert not bad


def test_criterion_10_euler_characteristic(record_property):
    with criterion(record_property, 10, "Euler characteristic of every filtration step", 60.0) as info:
        steps = bad = 0
        for pair in persistence_corpus():
            for X in pair:
                for K in sublevel_filtration(X).complexes:
                    top = max(len(s) for s in K)
                    chi = sum((-1) ** p * homology_basis(K, p).dim for p in range(top))
                    steps += 1
                    bad += chi != euler_characteristic(K)
        info.update(steps=steps, mismatches=bad)
        assert bad == 0
