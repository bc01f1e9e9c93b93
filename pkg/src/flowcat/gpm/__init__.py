"""Grid persistence modules over F2, their interleavings, barcodes and postcomposition."""

from .barcode import Barcode, BottleneckResult, barcode, bottleneck, bottleneck_match, module_from_barcode, rank_invariant
from .category import ModuleCategory, module_flow, precomposition_flow, weak_vs_omega
from .modules import (
    GridModule,
    ModuleMap,
    OmegaResult,
    brute_force_omega_interleaving,
    canonical_map,
    check_omega_interleaving,
    direct_sum,
    find_omega_interleaving,
    hom_space,
    interval_module,
    omega_distance,
    omega_search,
    random_module,
    shift_module,
    zero_module,
)
from .postcompose import (
    ComplexDiagram,
    ConfigurationError,
    SetDiagram,
    find_set_interleaving,
    free_module,
    free_postcomposition,
    postcompose,
    set_distance,
)

__all__ = [
    "Barcode",
    "barcode",
    "bottleneck",
    "bottleneck_match",
    "BottleneckResult",
    "brute_force_omega_interleaving",
    "canonical_map",
    "check_omega_interleaving",
    "ComplexDiagram",
    "ConfigurationError",
    "direct_sum",
    "find_omega_interleaving",
    "find_set_interleaving",
    "free_module",
    "free_postcomposition",
    "GridModule",
    "hom_space",
    "interval_module",
    "module_flow",
    "module_from_barcode",
    "ModuleCategory",
    "ModuleMap",
    "omega_distance",
    "omega_search",
    "OmegaResult",
    "postcompose",
    "precomposition_flow",
    "random_module",
    "rank_invariant",
    "set_distance",
    "SetDiagram",
    "shift_module",
    "weak_vs_omega",
    "zero_module",
]
