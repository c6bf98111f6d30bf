"""Similarity, substructure, and common-substructure search."""

from chemserve.search.fingerprint import (
    DEFAULT_NBITS,
    DEFAULT_RADIUS,
    Fingerprint,
    fingerprint,
    mix64,
    screen_fingerprint,
    tanimoto,
)
from chemserve.search.index import SearchIndex, build_index, similarity_search, substructure_search
from chemserve.search.mcs import DEFAULT_NODE_LIMIT, McsResult, max_common_substructure
from chemserve.search.substructure import (
    AtomMapping,
    atoms_compatible,
    has_substructure,
    match_substructure,
)

__all__ = [
    "AtomMapping",
    "DEFAULT_NBITS",
    "DEFAULT_NODE_LIMIT",
    "DEFAULT_RADIUS",
    "Fingerprint",
    "McsResult",
    "SearchIndex",
    "atoms_compatible",
    "build_index",
    "fingerprint",
    "has_substructure",
    "match_substructure",
    "max_common_substructure",
    "mix64",
    "screen_fingerprint",
    "similarity_search",
    "substructure_search",
    "tanimoto",
]
