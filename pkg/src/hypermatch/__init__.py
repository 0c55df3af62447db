"""Exact matching, cover and degree-threshold computations for k-uniform hypergraphs."""

from .hypercore import (
    EdgeWeighting,
    Hypergraph,
    VertexWeighting,
    degree,
    link,
    min_d_degree,
    threshold_hypergraph,
)
from .optmatch import (
    DualityReport,
    cover_number,
    fractional_matching,
    fractional_optimum,
    has_perfect_matching,
    matching_number,
)

__version__ = "0.1.0"

__all__ = [
    "Hypergraph",
    "VertexWeighting",
    "EdgeWeighting",
    "degree",
    "min_d_degree",
    "link",
    "threshold_hypergraph",
    "DualityReport",
    "matching_number",
    "has_perfect_matching",
    "cover_number",
    "fractional_matching",
    "fractional_optimum",
    "__version__",
]
