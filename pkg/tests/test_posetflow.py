import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from flowcat.core import INF, EpsilonGrid, PreconditionError, SizeError
from flowcat.fincat.category import check_fincat
from flowcat.fincat.flow import check_flow, interleaving_distance
from flowcat.fincat.generators import mutate_flow
from flowcat.posetflow import (
    FiniteMetricSpace,
    grid_for_distances,
    hausdorff,
    lattice_point,
    linf,
    linf_by_interleaving,
    materialize_poset_flow,
    poset_interleaving,
    subset_name,
    thicken,
)


def shift_on_integers(e, x):
    return x + int(round(e))


coords = st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=6)


def test_metric_axioms_checked():
    with pytest.raises(PreconditionError):
        FiniteMetricSpace(("a", "b"), [[0, 1], [2, 0]])
    with pytest.raises(PreconditionError):
        FiniteMetricSpace(("a", "b", "c"), [[0, 1, 5], [1, 0, 1], [5, 1, 0]])


def test_poset_interleaving_examples():
    grid = EpsilonGrid(1.0, 10)
    le = lambda x, y: x <= y
    assert poset_interleaving(le, shift_on_integers, 2, 2, grid) == 0.0
    assert poset_interleaving(le, shift_on_integers, 1, 4, grid) == 3.0
    same = lambda x, y: x == y
    assert poset_interleaving(same, lambda e, x: x, "p", "q", grid) == INF


def test_poset_interleaving_bisection_matches_scan():
    grid = EpsilonGrid(1.0, 16)
    le = lambda x, y: x <= y
    for a, b in itertools.product(range(-3, 12), repeat=2):
        scan = next((grid.value(k) for k in grid.indices()
                     if a <= b + k and b <= a + k), INF)
        assert poset_interleaving(le, shift_on_integers, a, b, grid) == scan


def test_hausdorff_examples():
    assert hausdorff([(0, 0)], [(3, 4)]) == 5.0
    assert hausdorff([0, 1], [0.5]) == 0.5
    A = [(1, 2), (3, 3)]
    assert hausdorff(A, A) == 0.0
    with pytest.raises(PreconditionError):
        hausdorff([], [(0, 0)])


@given(coords, coords)
def test_hausdorff_is_the_least_mutual_thickening(A, B):
    pts = sorted(set(A) | set(B))
    space = FiniteMetricSpace.from_coordinates(pts, ids=pts)
    A, B = set(A), set(B)
    h = hausdorff(A, B, space)
    assert math.isclose(h, hausdorff(sorted(A), sorted(B)))
    assert A <= thicken(B, h, space) and B <= thicken(A, h, space)
    smaller = [r for r in np.unique(space.dist) if r < h - 1e-9]
    for r in smaller:
        assert not (A <= thicken(B, r, space) and B <= thicken(A, r, space))


def test_linf_examples():
    assert linf([1, 2, 3], [1, 2, 3]) == 0.0
    assert linf([1, 2], [4, 0]) == 3.0
    with pytest.raises(PreconditionError):
        linf([1, 2], [1, 2, 3])


def test_linf_matches_the_shift_flow_within_a_grid_step():
    rng = np.random.default_rng(0)
    grid = EpsilonGrid(1e-4, 200_000)
    for _ in range(200):
        a, b = rng.uniform(-8, 8, size=(2, 3))
        approx = linf_by_interleaving(a, b, grid)
        assert 0.0 <= approx - linf(a, b) <= 1e-4 + 1e-9


def test_thicken_examples():
    space = FiniteMetricSpace.from_coordinates([[0, 0], [1, 0], [0, 3]])
    U = frozenset({"p0"})
    assert thicken(U, 0.0, space) == U
    assert thicken(U, space.diameter, space) == frozenset(space.points)


def test_thicken_monotone_on_five_points():
    rng = np.random.default_rng(3)
    space = FiniteMetricSpace.from_coordinates(rng.integers(0, 5, size=(5, 2)) + np.arange(5)[:, None] * 7)
    subsets = [frozenset(c) for r in range(6) for c in itertools.combinations(space.points, r)]
    radii = sorted(set(np.round(space.dist.ravel(), 6)))
    for U, V in itertools.product(subsets, repeat=2):
        if U <= V:
            for e in radii:
                assert thicken(U, e, space) <= thicken(V, e, space)
    for U in subsets:
        for e, z in itertools.product(radii[:4], repeat=2):
            assert thicken(U, e, space) <= thicken(U, e + z, space)
            assert thicken(thicken(U, e, space), z, space) <= thicken(U, e + z, space)


def test_hausdorff_flow_on_three_points():
    space = FiniteMetricSpace.from_coordinates([[0, 0], [2, 0], [0, 3]])
    positive = space.dist[space.dist > 0]
    grid = grid_for_distances(positive, float(positive.min()) / 2)
    flow = materialize_poset_flow("hausdorff", space, grid)
    assert check_fincat(flow.base) == []
    assert check_flow(flow) == []


def test_hausdorff_flow_distances_round_up_to_the_grid():
    space = FiniteMetricSpace.from_coordinates([[0, 0], [3, 0], [0, 4], [3, 4]])
    grid = grid_for_distances([space.diameter], 1.0)
    flow = materialize_poset_flow("hausdorff", space, grid)
    subsets = [frozenset(c) for r in range(1, 5) for c in itertools.combinations(space.points, r)]
    for A, B in itertools.product(subsets, repeat=2):
        h = hausdorff(A, B, space)
        d = interleaving_distance(flow, subset_name(A, space), subset_name(B, space))
        assert d == math.ceil(h - 1e-9)


def test_integer_shift_flow_matches_linf():
    grid = EpsilonGrid(1.0, 12)
    flow = materialize_poset_flow("shift_rn", (1, 6), grid)
    assert check_flow(flow) == []
    for a, b in itertools.product(flow.base.objects, repeat=2):
        assert interleaving_distance(flow, a, b) == linf(lattice_point(a), lattice_point(b))


def test_two_dimensional_box():
    grid = EpsilonGrid(1.0, 6)
    flow = materialize_poset_flow("shift_rn", (2, 3), grid)
    assert check_flow(flow) == []
    for a, b in itertools.product(flow.base.objects, repeat=2):
        assert interleaving_distance(flow, a, b) == linf(lattice_point(a), lattice_point(b))


def test_mutated_inclusion_is_detected():
    space = FiniteMetricSpace.from_coordinates([[0, 0], [1, 0], [0, 2]])
    flow = materialize_poset_flow("hausdorff", space, grid_for_distances([space.diameter], 1.0))
    rng = np.random.default_rng(0)
    inclusions = [f for f, (a, b) in flow.base.morphisms.items() if a != b]
    for f in inclusions[:10]:
        broken, *_ = mutate_flow(rng, flow, cell=("T.mor", 1, f))
        assert check_flow(broken)


def test_size_cap():
    space = FiniteMetricSpace.from_coordinates(np.arange(14).reshape(7, 2))
    with pytest.raises(SizeError):
        materialize_poset_flow("hausdorff", space, EpsilonGrid(1.0, 2))
    with pytest.raises(PreconditionError):
        materialize_poset_flow("sheaves", space, EpsilonGrid(1.0, 2))
