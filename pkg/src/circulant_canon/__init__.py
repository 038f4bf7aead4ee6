"""
Canonization machinery for circulant (di)graphs.

The public surface is re-exported here; the submodules hold the implementations.
"""

from circulant_canon.core import (
    ConnectionSet,
    Digraph,
    Labeling,
    Permutation,
    cayley,
    is_isomorphism,
    relabel,
)

__all__ = [
    "ConnectionSet",
    "Digraph",
    "Labeling",
    "Permutation",
    "cayley",
    "is_isomorphism",
    "relabel",
]
