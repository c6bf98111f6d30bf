"""Molecular descriptors derived from the graph alone.

Rotatable bonds use the plain degree-based rule (acyclic single
non-aromatic bonds between two heavy atoms of heavy degree >= 2) without
amide special-casing. Donor/acceptor counts look only at N and O.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

from chemserve.molgraph.elements import HYDROGEN
from chemserve.molgraph.mol import BondOrder, Molecule

_N_O = frozenset({7, 8})


@dataclass(frozen=True)
class DescriptorSet:
    molecular_weight: float
    heavy_atom_count: int
    ring_count: int
    rotatable_bonds: int
    hbd: int
    hba: int

    def as_dict(self) -> dict:
        return asdict(self)


def _heavy_degree(mol: Molecule, idx: int) -> int:
    return sum(1 for nbr, _ in mol.neighbors[idx] if mol.atoms[nbr].atomic_number > 1)


def _attached_h(mol: Molecule, idx: int) -> int:
    graph_h = sum(1 for nbr, _ in mol.neighbors[idx] if mol.atoms[nbr].atomic_number == 1)
    return mol.atoms[idx].implicit_h + graph_h


def compute_descriptors(mol: Molecule) -> DescriptorSet:
    mw = sum(a.element.standard_atomic_weight for a in mol.atoms)
    mw += sum(a.implicit_h for a in mol.atoms) * HYDROGEN.standard_atomic_weight

    rotatable = 0
    for bond in mol.bonds:
        if bond.order is not BondOrder.SINGLE or bond.in_ring:
            continue
        if _heavy_degree(mol, bond.a) >= 2 and _heavy_degree(mol, bond.b) >= 2:
            rotatable += 1

    hbd = 0
    hba = 0
    for idx, atom in enumerate(mol.atoms):
        if atom.atomic_number in _N_O:
            hba += 1
            if _attached_h(mol, idx) >= 1:
                hbd += 1

    return DescriptorSet(
        molecular_weight=round(mw, 3),
        heavy_atom_count=sum(1 for a in mol.atoms if a.atomic_number > 1),
        ring_count=mol.ring_info.cycle_rank,
        rotatable_bonds=rotatable,
        hbd=hbd,
        hba=hba,
    )
