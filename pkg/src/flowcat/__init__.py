"""Interleaving distances for categories with a flow, computed on finite data."""

from .core import (
    INF,
    EpsilonGrid,
    MetricReport,
    PreconditionError,
    SizeError,
    check_pseudometric,
    ext_add,
    format_ext,
)

__version__ = "0.1.0"

__all__ = [
    "check_pseudometric",
    "EpsilonGrid",
    "ext_add",
    "format_ext",
    "INF",
    "MetricReport",
    "PreconditionError",
    "SizeError",
]
