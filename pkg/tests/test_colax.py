import numpy as np
import pytest

from flowcat.core import EpsilonGrid, PreconditionError, ext_le
from flowcat.fincat.category import NatTrans
from flowcat.fincat.colax import (
    ColaxFunctor,
    check_colax,
    colax_equal,
    compose_colax,
    identity_colax,
    push_interleaving,
    verify_lipschitz,
)
from flowcat.fincat.flow import find_weak_interleaving, interleaving_distance, is_weak_interleaving
from flowcat.fincat.generators import ColaxSpec, random_colax, random_composable
from flowcat.fincat.instances import FlowSpec, chain_shift_spec, shift_flow


def terminal_spec(grid: EpsilonGrid) -> FlowSpec:
    return FlowSpec(("*",), frozenset({("*", "*")}), tuple({"*": "*"} for _ in range(grid.n + 1)), grid)


def all_pairs(flow):
    objs = flow.base.objects
    return [(a, b) for a in objs for b in objs]


def test_identity_colax_is_isometric():
    flow = shift_flow(length=4, n=4)
    cf = identity_colax(flow)
    assert check_colax(cf) == []
    rep = verify_lipschitz(cf, all_pairs(flow))
    assert rep.ok
    assert all(r[2] == r[3] for r in rep.rows)


def test_collapse_to_terminal_has_zero_target_distance():
    flow_spec = chain_shift_spec(4, 4)
    cf = ColaxSpec(flow_spec, terminal_spec(flow_spec.grid), {x: "*" for x in flow_spec.elements}, 0).build()
    assert check_colax(cf) == []
    rep = verify_lipschitz(cf, all_pairs(cf.source))
    assert rep.ok and all(r[3] == 0.0 for r in rep.rows)


def test_broken_eta_component_is_caught():
    flow = shift_flow(length=4, n=4)
    cf = identity_colax(flow)
    eta = list(cf.eta)
    comps = dict(eta[1].components)
    comps["1"] = "1<=2"  # eta(1) at 1 must land in T_1(1) = 2; this is typed, but wrong type
    eta[1] = NatTrans(None, None, comps)
    vs = check_colax(ColaxFunctor(flow, flow, cf.H, eta))
    assert vs
    assert all(("eta", 1) in v.involves for v in vs)


def test_pushed_interleaving_verifies_on_shift():
    flow = shift_flow(length=4, n=4)
    cf = identity_colax(flow)
    pair = find_weak_interleaving(flow, "0", "2", 2)
    Phi, Psi = push_interleaving(cf, pair, 2)
    assert is_weak_interleaving(flow, "0", "2", 2, Phi, Psi)


def test_random_colax_functors_are_lipschitz():
    rng = np.random.default_rng(1)
    for _ in range(20):
        cf = random_colax(rng).build()
        assert check_colax(cf) == []
        objs = cf.source.base.objects
        pairs = [(objs[i], objs[j]) for i, j in rng.integers(len(objs), size=(5, 2))]
        assert verify_lipschitz(cf, pairs).ok


def test_violation_reports_carry_both_distances():
    # A functor that separates objects the source interleaves cannot be 1-Lipschitz.
    grid = EpsilonGrid(1.0, 2)
    src = FlowSpec(("x", "y"), frozenset({("x", "x"), ("y", "y"), ("x", "y")}),
                   tuple({"x": "x", "y": "y"} if k == 0 else {"x": "y", "y": "y"} for k in range(3)), grid)
    tgt = FlowSpec(("x", "y"), frozenset({("x", "x"), ("y", "y"), ("x", "y")}),
                   tuple({"x": "x", "y": "y"} for _ in range(3)), grid)
    S, T = src.build(), tgt.build()
    H = identity_colax(T).H
    eta = [NatTrans(None, None, {"x": "x<=x", "y": "y<=y"}) for _ in range(3)]
    cf = ColaxFunctor(S, T, H, eta)
    assert check_colax(cf)
    rep = verify_lipschitz(cf, [("x", "y")])
    assert not rep.ok
    row = rep.violations[0]
    assert row[2] == 1.0 and row[3] == float("inf")
    d = rep.as_dict()["violations"][0]
    assert d["source"] == "1.0" and d["target"] == "inf"


def test_composition_unit_laws():
    rng = np.random.default_rng(6)
    for _ in range(10):
        cf = random_colax(rng).build()
        left = compose_colax(identity_colax(cf.source), cf)
        right = compose_colax(cf, identity_colax(cf.target))
        assert colax_equal(left, cf)
        assert colax_equal(right, cf)


def test_composites_are_colax_and_chain_distances():
    rng = np.random.default_rng(9)
    for _ in range(15):
        fs, gs = random_composable(rng)
        f = fs.build()
        g = gs.build(source=f.target)
        gf = compose_colax(f, g)
        assert check_colax(gf) == []
        for a, b in all_pairs(f.source)[:6]:
            d0 = interleaving_distance(f.source, a, b)
            d2 = interleaving_distance(g.target, gf.H.ob(a), gf.H.ob(b))
            assert ext_le(d2, d0)


def test_composition_requires_matching_middle():
    rng = np.random.default_rng(2)
    f = random_colax(rng).build()
    g = ColaxSpec(*(lambda s: (s, s))(chain_shift_spec(2, f.source.n)),
                  {str(i): str(i) for i in range(3)}, 0).build()
    with pytest.raises(PreconditionError):
        compose_colax(f, g)
