"""Canonical atom ranking by iterative neighborhood refinement.

Ranks are a bijection onto 0..n-1 that depends only on the abstract graph,
so any relabeling of the same molecule produces the same rank-induced atom
order. Ties surviving refinement are broken deterministically (lowest
member of the lowest tied class) and refinement is re-run.
"""

from __future__ import annotations

from chemserve.molgraph.mol import Molecule


def initial_invariant(mol: Molecule, idx: int) -> tuple[int, int, int, int, int, int]:
    """Seed invariant: element, degree, hydrogens, charge, ring flag, aromatic flag."""
    atom = mol.atoms[idx]
    return (
        atom.atomic_number,
        mol.degree(idx),
        atom.implicit_h,
        atom.formal_charge,
        int(atom.in_ring),
        int(atom.aromatic),
    )


def _dense(keys: list) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(mol: Molecule, ranks: list[int]) -> list[int]:
    n = len(ranks)
    while True:
        keys = []
        for idx in range(n):
            nbr_sig = sorted(
                (mol.bonds[bidx].order.code, ranks[nbr]) for nbr, bidx in mol.neighbors[idx]
            )
            keys.append((ranks[idx], tuple(nbr_sig)))
        new = _dense(keys)
        if new == ranks:
            return new
        ranks = new


def canonical_ranks(mol: Molecule) -> list[int]:
    """Canonical rank per atom index; empty molecule gives []."""
    n = len(mol.atoms)
    if n == 0:
        return []
    ranks = _dense([initial_invariant(mol, i) for i in range(n)])
    ranks = _refine(mol, ranks)
    while max(ranks) < n - 1:
        counts: dict[int, int] = {}
        for r in ranks:
            counts[r] = counts.get(r, 0) + 1
        tied = min(r for r, c in counts.items() if c > 1)
        chosen = min(i for i in range(n) if ranks[i] == tied)
        ranks = [r * 2 for r in ranks]
        ranks[chosen] -= 1
        ranks = _refine(mol, _dense(ranks))
    return ranks
