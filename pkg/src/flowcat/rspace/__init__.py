"""Vertex-valued simplicial complexes: sup-norm distance, sublevel persistence and stability."""

from .homology import betti, closure, euler_characteristic, homology_basis, induced_map
from .persistence import (
    Filtration,
    StabilityReport,
    induced_module_map,
    persistence_barcode,
    persistence_barcodes,
    persistence_module,
    stability_check,
    sublevel_filtration,
)
from .spaces import MSpacePL, PLSpace, as_mspace, dinf, dinf_m, real_line_space, verify_flow_iso

__all__ = [
    "as_mspace",
    "betti",
    "closure",
    "dinf",
    "dinf_m",
    "euler_characteristic",
    "Filtration",
    "homology_basis",
    "induced_map",
    "induced_module_map",
    "MSpacePL",
    "persistence_barcode",
    "persistence_barcodes",
    "persistence_module",
    "PLSpace",
    "real_line_space",
    "stability_check",
    "StabilityReport",
    "sublevel_filtration",
    "verify_flow_iso",
]
