"""Persistent homology of Lipschitz-filtered mapping spaces, with DGA dilatation tools."""

from .diagrams import bottleneck_distance, interleaving_distance, max_finite_length, smooth
from .persistence import (
    INF,
    Barcode,
    Cell,
    FilteredComplex,
    betti,
    build_filtered_complex,
    compute_barcode,
    rank_invariant,
)

__version__ = "0.1.0"
