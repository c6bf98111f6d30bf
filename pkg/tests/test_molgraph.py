import random

import pytest

from chemserve.errors import UnsupportedElement, ValenceError
from chemserve.formats import parse_smiles
from chemserve.molgraph import (
    BondOrder,
    MolBuilder,
    canonical_ranks,
    compute_descriptors,
    element,
    perceive_rings,
)

from conftest import permute_molecule


def test_element_table_bijection():
    symbols = "H B C N O F P S Cl Br I".split()
    numbers = set()
    for sym in symbols:
        e = element(sym)
        assert e.symbol == sym
        numbers.add(e.atomic_number)
    assert len(numbers) == len(symbols)


def test_unknown_element():
    with pytest.raises(UnsupportedElement):
        element("Xx")


class TestImplicitHydrogens:
    def test_methane_fills_to_four(self):
        mol = parse_smiles("C")
        assert mol.atoms[0].implicit_h == 4

    def test_bracket_fixes_count(self):
        assert parse_smiles("[CH3]").atoms[0].implicit_h == 3

    def test_pyrrole_nh(self):
        mol = parse_smiles("c1cc[nH]c1")
        n = next(a for a in mol.atoms if a.symbol == "N")
        assert n.implicit_h == 1
        assert n.explicit_h == 1

    def test_charged_nitrogen_uses_valence_four(self):
        # molfile-style construction: charge without a fixed H count
        builder = MolBuilder()
        builder.add_atom("N", formal_charge=1)
        assert builder.finalize().atoms[0].implicit_h == 4

    def test_charged_oxygen_anion(self):
        builder = MolBuilder()
        builder.add_atom("O", formal_charge=-1)
        builder.add_atom("C")
        builder.add_bond(0, 1, BondOrder.SINGLE)
        assert builder.finalize().atoms[0].implicit_h == 0

    def test_never_negative(self):
        for smi in ("c1ccccc1", "C(=O)=O", "N(=O)O", "c1ccc2ccccc2c1"):
            assert all(a.implicit_h >= 0 for a in parse_smiles(smi).atoms)

    def test_overbonded_carbon_raises(self):
        builder = MolBuilder()
        for _ in range(6):
            builder.add_atom("C")
        for i in range(1, 6):
            builder.add_bond(0, i, BondOrder.SINGLE)
        with pytest.raises(ValenceError):
            builder.finalize()


class TestRingPerception:
    def test_benzene(self):
        mol = parse_smiles("c1ccccc1")
        assert mol.ring_info.cycle_rank == 1
        assert all(a.in_ring for a in mol.atoms)

    def test_naphthalene_rank_two(self):
        mol = parse_smiles("c1ccc2ccccc2c1")
        assert len(mol.atoms) == 10 and len(mol.bonds) == 11
        assert mol.ring_info.cycle_rank == 2

    def test_acyclic(self):
        mol = parse_smiles("CCO")
        assert mol.ring_info.cycle_rank == 0
        assert not any(a.in_ring for a in mol.atoms)
        assert not any(b.in_ring for b in mol.bonds)

    def test_rank_formula_holds_on_corpus(self, corpus_mols):
        for mol in corpus_mols:
            components = len(mol.components())
            assert mol.ring_info.cycle_rank == len(mol.bonds) - len(mol.atoms) + components

    def test_bridge_not_in_ring(self):
        mol = parse_smiles("C1CC1CC1CC1")  # two rings joined by a chain
        chain_bonds = [b for b in mol.bonds if not b.in_ring]
        assert len(chain_bonds) == 2
        assert mol.ring_info.cycle_rank == 2

    def test_raw_api(self):
        info = perceive_rings(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
        assert info.cycle_rank == 1
        assert info.bond_in_ring == (True, True, True, False)
        assert info.atom_in_ring == (True, True, True, False)


class TestCanonicalRanks:
    def test_singleton(self):
        assert canonical_ranks(parse_smiles("C")) == [0]

    def test_bijection_on_corpus(self, corpus_mols):
        for mol in corpus_mols:
            ranks = canonical_ranks(mol)
            assert sorted(ranks) == list(range(len(mol.atoms)))

    def test_ethanol_separates_all_atoms(self):
        mol = parse_smiles("CCO")
        ranks = canonical_ranks(mol)
        assert len(set(ranks)) == 3

    def test_permutation_invariant_ordering(self, corpus_mols):
        rng = random.Random(11)
        for mol in corpus_mols[:12]:
            ranks = canonical_ranks(mol)
            signature = sorted(
                (r, mol.atoms[i].symbol, mol.atoms[i].implicit_h) for i, r in enumerate(ranks)
            )
            for _ in range(5):
                shuffled = permute_molecule(mol, rng)
                ranks2 = canonical_ranks(shuffled)
                signature2 = sorted(
                    (r, shuffled.atoms[i].symbol, shuffled.atoms[i].implicit_h)
                    for i, r in enumerate(ranks2)
                )
                assert signature2 == signature


class TestDescriptors:
    def test_ethanol(self):
        d = compute_descriptors(parse_smiles("CCO"))
        assert d.molecular_weight == pytest.approx(46.07, abs=0.01)
        assert d.rotatable_bonds == 0
        assert d.hbd == 1
        assert d.hba == 1
        assert d.heavy_atom_count == 3

    def test_benzene(self):
        d = compute_descriptors(parse_smiles("c1ccccc1"))
        assert d.molecular_weight == pytest.approx(78.11, abs=0.01)
        assert d.ring_count == 1
        assert d.rotatable_bonds == 0

    def test_butane_rotatable(self):
        d = compute_descriptors(parse_smiles("CCCC"))
        assert d.rotatable_bonds == 1
        assert d.heavy_atom_count == 4

    def test_naphthalene_rings(self):
        assert compute_descriptors(parse_smiles("c1ccc2ccccc2c1")).ring_count == 2

    def test_growth_monotonicity(self, corpus_mols):
        # adding a heavy atom plus a bond never shrinks weight or atom count
        for mol in corpus_mols[:20]:
            base = compute_descriptors(mol)
            builder = MolBuilder()
            for atom in mol.atoms:
                builder.add_atom(atom.symbol, atom.formal_charge, atom.aromatic, atom.explicit_h)
            for bond in mol.bonds:
                builder.add_bond(bond.a, bond.b, bond.order)
            attach_at = next(
                (i for i, a in enumerate(mol.atoms) if a.implicit_h > 0 and not a.aromatic),
                None,
            )
            if attach_at is None:
                continue
            new = builder.add_atom("C")
            builder.add_bond(attach_at, new, BondOrder.SINGLE)
            grown = compute_descriptors(builder.finalize())
            assert grown.molecular_weight > base.molecular_weight
            assert grown.heavy_atom_count == base.heavy_atom_count + 1


def test_molecule_is_frozen():
    mol = parse_smiles("CCO")
    with pytest.raises(AttributeError):
        mol.atoms = ()
