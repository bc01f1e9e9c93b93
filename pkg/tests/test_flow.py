import itertools

import numpy as np
import pytest

from flowcat.core import INF, EpsilonGrid, PreconditionError
from flowcat.fincat.flow import (
    check_flow,
    compose_interleavings,
    extend_interleaving,
    find_weak_interleaving,
    interleaving_distance,
    interleaving_search,
    is_weak_interleaving,
)
from flowcat.fincat.generators import mutate_flow, random_flow, random_flow_spec, set_cell
from flowcat.fincat.instances import discrete_flow, shift_flow
from flowcat.fincat.category import check_fincat
from flowcat.posetflow import FiniteMetricSpace, materialize_poset_flow


def test_strict_shift_flow_passes():
    assert check_flow(shift_flow(length=6, n=6)) == []


def test_thickening_flow_on_four_points_passes():
    space = FiniteMetricSpace.from_coordinates([[0, 0], [1, 0], [0, 2], [3, 3]])
    flow = materialize_poset_flow("hausdorff", space, EpsilonGrid(1.0, 3))
    assert check_flow(flow) == []


def test_mu_redirect_violations_all_mention_the_pair():
    rng = np.random.default_rng(5)
    for _ in range(40):
        flow_spec = random_flow_spec(rng)
        if flow_spec.order > 1 and len(flow_spec.elements) > 1:
            break
    flow = flow_spec.build()
    a = flow.base.objects[0]
    old = flow.mu[(1, 1)].at(a)
    same_type = [f for f in flow.base.hom(flow.base.dom(old), flow.base.cod(old)) if f != old]
    broken = set_cell(flow, ("mu", (1, 1), a), same_type[0])
    vs = check_flow(broken)
    assert vs
    assert all(("mu", 1, 1) in v.involves for v in vs)


def test_mu_redirect_on_poset_is_a_typing_violation():
    flow = shift_flow(length=3, n=4)
    broken = set_cell(flow, ("mu", (1, 1), "0"), "2<=3")
    vs = check_flow(broken)
    assert [v.law for v in vs] == ["mu(1,1):typing"]


def test_reflexive_interleaving_is_unit():
    flow = random_flow(np.random.default_rng(2))
    for a in flow.base.objects:
        phi, psi = find_weak_interleaving(flow, a, a, 0)
        assert is_weak_interleaving(flow, a, a, 0, flow.u.at(a), flow.u.at(a))
        assert is_weak_interleaving(flow, a, a, 0, phi, psi)


def test_shift_distances():
    flow = shift_flow(length=6, n=6)
    assert interleaving_distance(flow, "1", "3") == 2.0
    assert find_weak_interleaving(flow, "1", "3", 1) is None
    assert interleaving_distance(flow, "2", "2") == 0.0


def test_discrete_flow_never_interleaves():
    flow = discrete_flow()
    for k in range(flow.grid.half + 1):
        assert find_weak_interleaving(flow, "a", "b", k) is None
    res = interleaving_search(flow, "a", "b")
    assert res.value == INF and res.capped


def test_index_out_of_range():
    flow = shift_flow(length=3, n=4)
    with pytest.raises(PreconditionError):
        find_weak_interleaving(flow, "0", "1", 3)


def test_poset_lemma_on_shift():
    flow = shift_flow(length=6, n=6)
    for a, b in itertools.product(flow.base.objects, repeat=2):
        for k in range(flow.grid.half + 1):
            om = lambda x: str(min(int(x) + k, 6))
            expect = int(a) <= int(om(b)) and int(b) <= int(om(a))
            assert (find_weak_interleaving(flow, a, b, k) is not None) == expect


def test_compose_unit_then_pair():
    flow = shift_flow(length=6, n=6)
    unit = (flow.u.at("1"), flow.u.at("1"))
    pair = find_weak_interleaving(flow, "1", "2", 1)
    phi, psi = compose_interleavings(flow, unit, 0, pair, 1)
    assert is_weak_interleaving(flow, "1", "2", 1, phi, psi)


def test_compose_shift_chain():
    flow = shift_flow(length=6, n=6)
    p12 = find_weak_interleaving(flow, "1", "2", 1)
    p23 = find_weak_interleaving(flow, "2", "3", 1)
    phi, psi = compose_interleavings(flow, p12, 1, p23, 1)
    assert phi.startswith("1<=") and psi.startswith("3<=")
    assert is_weak_interleaving(flow, "1", "3", 2, phi, psi)


def test_compose_overflow():
    flow = shift_flow(length=6, n=6)
    p = find_weak_interleaving(flow, "1", "3", 2)
    with pytest.raises(PreconditionError):
        compose_interleavings(flow, p, 2, p, 2)


def test_compose_random_hausdorff_pairs():
    rng = np.random.default_rng(11)
    space = FiniteMetricSpace.from_coordinates([[0, 0], [1, 0], [0, 1], [2, 2]])
    flow = materialize_poset_flow("hausdorff", space, EpsilonGrid(0.5, 8))
    objs = flow.base.objects
    done = 0
    while done < 100:
        a, b, c = (objs[i] for i in rng.integers(len(objs), size=3))
        j, k = (int(x) for x in rng.integers(0, 3, size=2))
        p, q = find_weak_interleaving(flow, a, b, j), find_weak_interleaving(flow, b, c, k)
        if p is None or q is None or j + k > flow.grid.half:
            continue
        done += 1
        phi, psi = compose_interleavings(flow, p, j, q, k)
        assert is_weak_interleaving(flow, a, c, j + k, phi, psi)


def test_random_twisted_flows_are_flows():
    rng = np.random.default_rng(0)
    for _ in range(25):
        flow = random_flow(rng)
        assert check_fincat(flow.base) == []
        assert check_flow(flow) == []


def test_interleavings_are_monotone_in_the_index():
    rng = np.random.default_rng(3)
    for _ in range(15):
        flow = random_flow(rng)
        for a, b in itertools.product(flow.base.objects, repeat=2):
            found = [find_weak_interleaving(flow, a, b, k) for k in range(flow.grid.half + 1)]
            for j, w in enumerate(found):
                if w is None:
                    continue
                assert all(x is not None for x in found[j:])
                for k in range(j, flow.grid.half + 1):
                    phi, psi = extend_interleaving(flow, w, j, k)
                    assert is_weak_interleaving(flow, a, b, k, phi, psi)


def test_distance_is_a_pseudometric_on_random_flows():
    from flowcat.core import check_pseudometric

    rng = np.random.default_rng(8)
    for _ in range(20):
        flow = random_flow(rng)
        cap = flow.grid.value(flow.grid.half)
        r = check_pseudometric(lambda a, b: interleaving_distance(flow, a, b), flow.base.objects, cap=cap)
        assert r.ok, r.as_dict()


def test_triangle_witness_comes_from_composition():
    rng = np.random.default_rng(12)
    checked = 0
    for _ in range(30):
        flow = random_flow(rng)
        objs, half = flow.base.objects, flow.grid.half
        for a, b, c in itertools.product(objs, repeat=3):
            sa, sb = interleaving_search(flow, a, b), interleaving_search(flow, b, c)
            if sa.index is None or sb.index is None or sa.index + sb.index > half:
                continue
            phi, psi = compose_interleavings(flow, sa.witness, sa.index, sb.witness, sb.index)
            assert is_weak_interleaving(flow, a, c, sa.index + sb.index, phi, psi)
            checked += 1
    assert checked > 50


def _nested(flow, a, b, k):
    C, T = flow.base, flow.T
    for phi in C.hom(a, T[k].ob(b)):
        for psi in C.hom(b, T[k].ob(a)):
            if is_weak_interleaving(flow, a, b, k, phi, psi):
                return phi, psi
    return None


def test_grouped_search_matches_the_double_loop(monkeypatch):
    import flowcat.fincat.flow as flowmod

    rng = np.random.default_rng(21)
    monkeypatch.setattr(flowmod, "_NESTED_LIMIT", 0)
    for _ in range(20):
        flow = random_flow(rng)
        for a, b in itertools.product(flow.base.objects, repeat=2):
            for k in range(flow.grid.half + 1):
                assert find_weak_interleaving(flow, a, b, k) == _nested(flow, a, b, k)


def test_every_single_cell_mutation_is_detected():
    rng = np.random.default_rng(4)
    missed = []
    for _ in range(30):
        flow = random_flow(rng)
        if len(flow.base.morphisms) < 2:
            continue
        broken, cell, old, new = mutate_flow(rng, flow)
        if not (check_fincat(broken.base) or check_flow(broken)):
            missed.append((cell, old, new))
    assert not missed
