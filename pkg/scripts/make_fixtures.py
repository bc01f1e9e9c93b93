"""Regenerate the example inputs under ``data/``."""

import json
from pathlib import Path

from flowcat.fincat.category import Functor, NatTrans
from flowcat.fincat.colax import ColaxFunctor
from flowcat.fincat.generators import set_cell
from flowcat.fincat.instances import FlowSpec, discrete_flow, shift_flow
from flowcat.fincat.serialize import dumps
from flowcat.core import EpsilonGrid

DATA = Path(__file__).resolve().parent.parent / "data"


def write(name: str, text: str) -> None:
    (DATA / name).write_text(text if text.endswith("\n") else text + "\n")


def write_json(name: str, obj) -> None:
    write(name, json.dumps(obj, indent=2, sort_keys=True))


def broken_colax() -> ColaxFunctor:
    # The chain 0 < 1 with its shift, sent to x < y where translations do nothing.
    # No comparison H T_k 0 -> S_k H 0 exists (it would be y -> x), so eta is ill-typed,
    # and the images x, y are never interleaved although 0, 1 are at distance 1.
    src = shift_flow(length=1, n=2)
    grid = EpsilonGrid(1.0, 2)
    leq = frozenset({("x", "x"), ("y", "y"), ("x", "y")})
    tgt = FlowSpec(("x", "y"), leq, tuple({"x": "x", "y": "y"} for _ in range(3)), grid).build()
    obj = {"0": "x", "1": "y"}
    mor = {"0<=0": "x<=x", "1<=1": "y<=y", "0<=1": "x<=y"}
    H = Functor(src.base, tgt.base, obj, mor)
    eta = [NatTrans(None, None, {"0": "x<=x", "1": "y<=y"}) for _ in range(3)]
    return ColaxFunctor(src, tgt, H, eta)


def main() -> None:
    DATA.mkdir(exist_ok=True)
    flow = shift_flow(length=3, n=4)
    write("shift_flow.json", dumps(flow, indent=2))
    write("broken_mu_flow.json", dumps(set_cell(flow, ("mu", (1, 1), "0"), "2<=3"), indent=2))
    write("discrete_flow.json", dumps(discrete_flow(), indent=2))
    write("broken_colax.json", dumps(broken_colax(), indent=2))
    write("malformed.json", '{"kind": "flow", "grid": {"delta": 1.0, "n": 2},')
    write_json("hausdorff_singletons.json", {"A": [[0, 0]], "B": [[3, 4]]})
    write_json("linf_equal.json", {"a": [1.5, -2.0, 3.0], "b": [1.5, -2.0, 3.0]})
    write_json("segment_a.json", {"vertices": [0, 1], "simplices": [[0, 1]], "values": {"0": 0, "1": 5}})
    write_json("segment_b.json", {"vertices": [0, 1], "simplices": [[0, 1]], "values": {"0": 4, "1": 0}})
    write_json(
        "circle.json",
        {"vertices": [0, 1, 2], "simplices": [[0, 1], [1, 2], [0, 2]], "values": {"0": 0, "1": 1, "2": 2}},
    )
    write("square.off", "OFF\n4 2 0\n0 0 0 0.0\n1 0 0 1.0\n1 1 0 3.0\n0 1 0 2.0\n3 0 1 2\n3 0 2 3\n")
    write_json("barcode_a.json", [[0, 4]])
    write_json("barcode_b.json", [])


if __name__ == "__main__":
    main()
