import itertools

import numpy as np
import pytest

from flowcat.core import INF, PreconditionError, SizeError, check_pseudometric
from flowcat.fincat.serialize import SchemaError
from flowcat.gpm.barcode import barcode
from flowcat.posetflow import FiniteMetricSpace
from flowcat.rspace.homology import betti, closure, euler_characteristic, homology_basis, induced_map
from flowcat.rspace.io import plspace_from_json, plspace_from_off, plspace_to_json
from flowcat.rspace.persistence import (
    induced_module_map,
    perturb,
    persistence_barcode,
    persistence_barcodes,
    persistence_module,
    random_complex,
    random_plspace,
    stability_check,
    sublevel_filtration,
)
from flowcat.rspace.spaces import (
    MSpacePL,
    PLSpace,
    as_mspace,
    dinf,
    dinf_m,
    dinf_witness,
    real_line_space,
    verify_flow_iso,
)

TRIANGLE_BOUNDARY = [(0, 1), (1, 2), (0, 2)]


def segment(a, b) -> PLSpace:
    return PLSpace.from_simplices([(0, 1)], {0: a, 1: b})


def circle(values) -> PLSpace:
    return PLSpace.from_simplices(TRIANGLE_BOUNDARY, dict(enumerate(values)))


def random_space(rng, n=None) -> PLSpace:
    return random_plspace(rng, n or int(rng.integers(2, 8)))


# -- complexes and homology -----------------------------------------------------------


def test_complex_must_be_closed():
    with pytest.raises(PreconditionError):
        PLSpace(((0, 1),), {0: 0.0, 1: 1.0})
    with pytest.raises(PreconditionError):
        PLSpace.from_simplices([(0, 1)], {0: 0.0})


def test_betti_numbers_of_small_complexes():
    circ = closure(TRIANGLE_BOUNDARY)
    disk = closure([(0, 1, 2)])
    sphere = closure([s for s in itertools.combinations(range(4), 3)])
    assert [betti(circ, p) for p in range(2)] == [1, 1]
    assert [betti(disk, p) for p in range(3)] == [1, 0, 0]
    assert [betti(sphere, p) for p in range(3)] == [1, 0, 1]
    two_points = closure([(0,), (1,)])
    assert betti(two_points, 0) == 2


def test_euler_characteristic_matches_homology():
    rng = np.random.default_rng(0)
    for _ in range(100):
        K = random_complex(rng, int(rng.integers(1, 9)), edge_p=0.6)
        chi = sum((-1) ** p * homology_basis(K, p).dim for p in range(3))
        assert chi == euler_characteristic(K)
        assert all(homology_basis(K, p).dim == betti(K, p) for p in range(3))


def test_induced_map_of_a_fold():
    # Folding the circle onto an edge kills H1 and keeps H0.
    circ = closure(TRIANGLE_BOUNDARY)
    edge = closure([(0, 1)])
    fold = {0: 0, 1: 1, 2: 1}
    for p, expect in ((0, [[1]]), (1, np.zeros((0, 1)))):
        M = induced_map(homology_basis(circ, p), homology_basis(edge, p), fold, edge)
        assert np.array_equal(M, expect)


# -- dinf -------------------------------------------------------------------------------


def test_dinf_examples():
    X = circle((0, 1, 2))
    assert dinf(X, X) == 0.0
    assert dinf(X, X.with_values({v: x - 2.5 for v, x in X.values.items()})) == 2.5
    assert dinf(segment(0, 5), segment(4, 0)) == 1.0


def test_dinf_constant_offset_on_random_complexes():
    rng = np.random.default_rng(1)
    for _ in range(30):
        X = random_space(rng)
        c = float(rng.uniform(-3, 3))
        assert abs(dinf(X, X.with_values({v: x + c for v, x in X.values.items()})) - abs(c)) < 1e-12


def test_dinf_non_isomorphic():
    assert dinf(segment(0, 1), circle((0, 1, 2))) == INF
    path = PLSpace.from_simplices([(0, 1), (1, 2)], {0: 0, 1: 0, 2: 0})
    star = PLSpace.from_simplices([(0, 1), (0, 2), (0, 3)], dict.fromkeys(range(4), 0.0))
    assert dinf(path, star) == INF


def test_dinf_witness_is_an_isomorphism():
    rng = np.random.default_rng(2)
    for _ in range(30):
        X = random_space(rng)
        perm = rng.permutation(len(X.vertices))
        relabel = {v: int(perm[i]) for i, v in enumerate(X.vertices)}
        K = [tuple(relabel[v] for v in s) for s in X.complex]
        Y = PLSpace(closure(K), {relabel[v]: float(rng.uniform(0, 10)) for v in X.vertices})
        res = dinf_witness(X, Y)
        phi = res.isomorphism
        images = {tuple(sorted(phi[v] for v in s)) for s in X.complex}
        assert images == set(Y.complex)
        assert res.value == max(abs(X.values[v] - Y.values[phi[v]]) for v in X.vertices)


def test_dinf_matches_exhaustive_bijections():
    rng = np.random.default_rng(3)
    for _ in range(40):
        X = random_space(rng, int(rng.integers(2, 6)))
        Y = X.with_values({v: float(rng.integers(0, 5)) for v in X.vertices})
        Kset = set(X.complex)
        best = INF
        for perm in itertools.permutations(X.vertices):
            phi = dict(zip(X.vertices, perm))
            if {tuple(sorted(phi[v] for v in s)) for s in X.complex} == Kset:
                best = min(best, max(abs(X.values[v] - Y.values[phi[v]]) for v in X.vertices))
        assert dinf(X, Y) == best


def test_dinf_size_cap():
    big = PLSpace.from_simplices([(i, i + 1) for i in range(13)], {i: 0.0 for i in range(14)})
    with pytest.raises(SizeError):
        dinf(big, big)


def test_dinf_is_a_pseudometric():
    rng = np.random.default_rng(4)
    bases = [random_complex(rng, int(rng.integers(3, 6))) for _ in range(3)]
    spaces = []
    for i in range(24):
        K = bases[i % 3]
        spaces.append(PLSpace(K, {s[0]: float(rng.integers(0, 6)) for s in K if len(s) == 1}))
    assert check_pseudometric(dinf, spaces, tol=1e-9).ok


def test_dinf_m_examples():
    rng = np.random.default_rng(5)
    for _ in range(30):
        X = random_space(rng)
        Y = perturb(rng, X, 2.0)
        M = real_line_space(list(X.values.values()) + list(Y.values.values()))
        assert dinf_m(as_mspace(X, M), as_mspace(X, M)) == 0.0
        assert abs(dinf_m(as_mspace(X, M), as_mspace(Y, M)) - dinf(X, Y)) < 1e-12
    M = FiniteMetricSpace.from_coordinates([[0, 0], [3, 4]])
    a = MSpacePL(closure([(0, 1)]), {0: "p0", 1: "p1"}, M)
    b = MSpacePL(closure(TRIANGLE_BOUNDARY), {0: "p0", 1: "p1", 2: "p0"}, M)
    assert dinf_m(a, b) == INF
    swapped = MSpacePL(closure([(0, 1)]), {0: "p1", 1: "p1"}, M)
    assert dinf_m(a, swapped) == 5.0


# -- the slice-flow bijection ---------------------------------------------------------


def test_flow_iso_at_zero():
    X = as_mspace(circle((0, 1, 2)))
    assert verify_flow_iso(X, 0.0)


def test_flow_iso_on_samples():
    rng = np.random.default_rng(6)
    for _ in range(100):
        K = random_complex(rng, int(rng.integers(1, 6)))
        values = {s[0]: float(rng.integers(0, 8)) * 0.5 for s in K if len(s) == 1}
        grid = real_line_space(np.arange(-2, 6.01, 0.25))
        X = MSpacePL(K, values, grid)
        assert verify_flow_iso(X, float(rng.integers(0, 5)) * 0.25)


def test_flow_iso_rejects_a_perturbed_inverse():
    X = MSpacePL(closure([(0, 1)]), {0: 1.0, 1: 2.0}, real_line_space(np.arange(0, 4.01, 0.5)))
    f = X.values
    assert not verify_flow_iso(X, 1.0, inverse=lambda x, t: (x, t + f[x] + 0.5))
    assert not verify_flow_iso(X, 1.0, forward=lambda x, m: (x, f[x] - m))


# -- filtrations and persistence ---------------------------------------------------------


def test_filtration_examples():
    F = sublevel_filtration(PLSpace(((0,),), {0: 3.0}))
    assert F.values == (3.0,) and F.complexes == (((0,),),)
    F = sublevel_filtration(segment(0, 1))
    assert [set(K) for K in F.complexes] == [{(0,)}, {(0,), (1,), (0, 1)}]
    F = sublevel_filtration(circle((0, 1, 2)))
    assert [len(K) for K in F.complexes] == [1, 3, 6]
    assert set(F.complexes[-1]) == set(closure(TRIANGLE_BOUNDARY))


def test_ties_merge():
    F = sublevel_filtration(circle((1, 1, 2)))
    assert F.values == (1.0, 2.0)


def test_filtration_nesting_on_random_spaces():
    rng = np.random.default_rng(7)
    for _ in range(50):
        X = random_space(rng)
        F = sublevel_filtration(X)
        assert all(set(A) <= set(B) for A, B in zip(F.complexes, F.complexes[1:]))
        assert set(F.complexes[-1]) == set(X.complex)


def test_persistence_module_examples():
    M = persistence_module(sublevel_filtration(segment(0, 1)), 0)
    assert M.dims == (1, 1) and np.array_equal(M.steps[0], [[1]])
    M = persistence_module(sublevel_filtration(circle((0, 1, 2))), 1)
    assert M.dims == (0, 0, 1)
    X = random_plspace(np.random.default_rng(8), 6, edge_p=1.0)
    assert persistence_module(sublevel_filtration(X), 0).dims[-1] == 1


def test_barcode_examples():
    assert persistence_barcode(PLSpace(((0,),), {0: 3.0}), 0).bars == ((3.0, INF),)
    two = PLSpace.from_simplices([(0, 1)], {0: 0.0, 1: 1.0})
    assert persistence_barcode(two, 0).bars == ((0.0, INF),)
    assert persistence_barcode(circle((0, 1, 2)), 1).bars == ((2.0, INF),)
    merge = PLSpace.from_simplices([(0, 1), (1, 2)], {0: 0.0, 1: 2.0, 2: 1.0})
    assert persistence_barcode(merge, 0).bars == ((0.0, INF), (1.0, 2.0))


def test_two_barcode_routes_agree():
    rng = np.random.default_rng(9)
    for _ in range(100):
        X = random_space(rng)
        F = sublevel_filtration(X)
        for p in (0, 1):
            via_module = barcode(persistence_module(F, p))
            assert persistence_barcode(X, p, grid=True).bars == via_module.bars


def test_induced_module_map_is_natural():
    rng = np.random.default_rng(10)
    for _ in range(30):
        X = random_space(rng)
        lowered = X.with_values({v: x - float(rng.uniform(0, 2)) for v, x in X.values.items()})
        ident = {v: v for v in X.vertices}
        for p in (0, 1):
            assert induced_module_map(X, lowered, ident, p).is_natural()
    fold_src = circle((0, 1, 2))
    fold_tgt = segment(0, 1)
    phi = induced_module_map(fold_src, fold_tgt, {0: 0, 1: 1, 2: 1}, 0)
    assert phi.is_natural()
    with pytest.raises(PreconditionError):
        induced_module_map(segment(0, 0), segment(1, 1), {0: 0, 1: 1}, 0)


def test_stability_examples():
    X = circle((0, 1, 2))
    r = stability_check(X, X, 1)
    assert r.ok and r.bottleneck == 0.0 and r.dinf == 0.0
    Y = X.with_values({v: x + 1.5 for v, x in X.values.items()})
    for p in (0, 1):
        r = stability_check(X, Y, p)
        assert r.ok and abs(r.bottleneck - 1.5) < 1e-12 and abs(r.dinf - 1.5) < 1e-12
    r = stability_check(segment(0, 1), X, 0)
    assert r.ok and r.dinf == INF
    assert r.as_dict()["dinf"] == "inf"


def test_perturbations_are_stable():
    rng = np.random.default_rng(11)
    for _ in range(50):
        X = random_space(rng, int(rng.integers(5, 15)))
        eta = float(rng.uniform(0.01, 1.0))
        Y = perturb(rng, X, eta)
        for p in (0, 1):
            r = stability_check(X, Y, p)
            assert r.ok and r.bottleneck <= eta + 1e-9


# -- io ------------------------------------------------------------------------------------


def test_json_round_trip():
    rng = np.random.default_rng(12)
    for _ in range(20):
        X = random_space(rng)
        Y = plspace_from_json(plspace_to_json(X))
        assert Y.complex == X.complex and Y.values == X.values


def test_json_errors():
    with pytest.raises(SchemaError) as exc:
        plspace_from_json({"vertices": [0, 1], "simplices": [[0, 2]], "values": {"0": 0, "1": 1}})
    assert exc.value.path == "$.simplices[0][1]"
    with pytest.raises(SchemaError) as exc:
        plspace_from_json({"vertices": [0], "simplices": [], "values": {"0": "x"}})
    assert exc.value.path == "$.values.0"


OFF = """OFF
# square with a diagonal
4 2 5
0 0 0 0.0
1 0 0 1.0
1 1 0 2.0
0 1 0 1.5
3 0 1 2
3 0 2 3
"""


def test_off_import():
    X = plspace_from_off(OFF)
    assert len(X.vertices) == 4
    assert sorted(len(s) for s in X.complex).count(3) == 2
    assert X.values[2] == 2.0
    bcs = persistence_barcodes(X)
    assert bcs.real[0].bars == ((0.0, INF),)
    assert len(bcs.real[1]) == 0
    quad = plspace_from_off("OFF 4 1 0\n0 0 0\n1 0 1\n1 1 2\n0 1 3\n4 0 1 2 3\n")
    assert sorted(len(s) for s in quad.complex).count(3) == 2


def test_off_errors():
    with pytest.raises(SchemaError):
        plspace_from_off("")
    with pytest.raises(SchemaError):
        plspace_from_off("OFF\n2 1 0\n0 0 0\n1 0 0\n3 0 1 5\n")
