"""Finite categories with a flow: data types, law checkers and interleaving search."""

from .category import (
    CompositionError,
    FinCat,
    Functor,
    LazyFunctor,
    LazyNatTrans,
    NatTrans,
    Violation,
    check_fincat,
    check_functor,
    check_nat,
    compose,
    compose_functors,
    identity_functor,
    identity_nat,
    morphisms,
    tabulate,
)
from .colax import (
    ColaxFunctor,
    LipschitzReport,
    check_colax,
    colax_equal,
    compose_colax,
    identity_colax,
    push_interleaving,
    verify_lipschitz,
)
from .flow import (
    GridFlow,
    InterleavingResult,
    check_flow,
    compose_interleavings,
    extend_interleaving,
    find_weak_interleaving,
    interleaving_distance,
    interleaving_index,
    interleaving_search,
    is_weak_interleaving,
)
from .instances import FlowSpec, discrete_flow, poset_category, shift_flow

__all__ = [
    "check_colax",
    "check_fincat",
    "check_flow",
    "check_functor",
    "check_nat",
    "colax_equal",
    "ColaxFunctor",
    "compose",
    "compose_colax",
    "compose_functors",
    "compose_interleavings",
    "CompositionError",
    "discrete_flow",
    "extend_interleaving",
    "FinCat",
    "find_weak_interleaving",
    "FlowSpec",
    "Functor",
    "GridFlow",
    "identity_colax",
    "identity_functor",
    "identity_nat",
    "interleaving_distance",
    "interleaving_index",
    "interleaving_search",
    "InterleavingResult",
    "is_weak_interleaving",
    "LazyFunctor",
    "LazyNatTrans",
    "LipschitzReport",
    "morphisms",
    "NatTrans",
    "poset_category",
    "push_interleaving",
    "shift_flow",
    "tabulate",
    "verify_lipschitz",
    "Violation",
]
