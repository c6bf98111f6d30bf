"""Core molecular graph types and per-molecule computations."""

from chemserve.molgraph.canon import canonical_ranks, initial_invariant
from chemserve.molgraph.descriptors import DescriptorSet, compute_descriptors
from chemserve.molgraph.elements import (
    AROMATIC_SYMBOLS,
    ORGANIC_SUBSET,
    Element,
    adjusted_valences,
    element,
)
from chemserve.molgraph.mol import (
    Atom,
    Bond,
    BondOrder,
    MolBuilder,
    Molecule,
    RingInfo,
    fill_implicit_h,
    perceive_rings,
)

__all__ = [
    "AROMATIC_SYMBOLS",
    "Atom",
    "Bond",
    "BondOrder",
    "DescriptorSet",
    "Element",
    "MolBuilder",
    "Molecule",
    "ORGANIC_SUBSET",
    "RingInfo",
    "adjusted_valences",
    "canonical_ranks",
    "compute_descriptors",
    "element",
    "fill_implicit_h",
    "initial_invariant",
    "perceive_rings",
]
