import random
import time

import pytest

from chemserve.errors import AromaticityError, ChemserveError, SmilesSyntaxError, ValenceError
from chemserve.formats import canonical_smiles, parse_smiles, write_smiles
from chemserve.molgraph import BondOrder

from conftest import permute_molecule


class TestParsing:
    def test_ethanol(self):
        mol = parse_smiles("CCO")
        assert len(mol.atoms) == 3
        assert len(mol.bonds) == 2
        assert all(b.order is BondOrder.SINGLE for b in mol.bonds)
        oxygen = next(a for a in mol.atoms if a.symbol == "O")
        assert oxygen.implicit_h == 1

    def test_ring_closure(self):
        mol = parse_smiles("C1CC1")
        assert mol.ring_info.cycle_rank == 1
        assert len(mol.bonds) == 3

    def test_unmatched_ring_closure(self):
        with pytest.raises(SmilesSyntaxError) as err:
            parse_smiles("C1CC")
        assert "ring closure" in str(err.value)
        assert err.value.position == 1

    def test_bond_symbols(self):
        mol = parse_smiles("C=C")
        assert mol.bonds[0].order is BondOrder.DOUBLE
        assert parse_smiles("C#N").bonds[0].order is BondOrder.TRIPLE

    def test_branches(self):
        mol = parse_smiles("CC(C)(C)C")
        center = max(range(5), key=mol.degree)
        assert mol.degree(center) == 4

    def test_components(self):
        mol = parse_smiles("CC.OC")
        assert len(mol.components()) == 2

    def test_percent_ring_closure(self):
        assert canonical_smiles("C%10CCCCC%10") == canonical_smiles("C1CCCCC1")

    def test_bracket_charges(self):
        assert parse_smiles("[NH4+]").atoms[0].formal_charge == 1
        assert parse_smiles("[O-2]").atoms[0].formal_charge == -2
        assert parse_smiles("[N+2]").atoms[0].formal_charge == 2
        assert parse_smiles("[O--]").atoms[0].formal_charge == -2

    def test_bracket_defaults_to_zero_h(self):
        assert parse_smiles("[C]").atoms[0].implicit_h == 0

    def test_ring_bond_order_on_either_side(self):
        a = parse_smiles("C=1CCCCC1")
        b = parse_smiles("C1CCCCC=1")
        assert write_smiles(a) == write_smiles(b)
        assert any(bond.order is BondOrder.DOUBLE for bond in a.bonds)

    def test_conflicting_ring_bond_orders(self):
        with pytest.raises(SmilesSyntaxError):
            parse_smiles("C=1CCCCC-1")

    def test_biphenyl_linker_is_single(self):
        mol = parse_smiles("c1ccccc1c1ccccc1")
        linkers = [b for b in mol.bonds if not b.in_ring]
        assert len(linkers) == 1
        assert linkers[0].order is BondOrder.SINGLE

    @pytest.mark.parametrize(
        "bad",
        ["C(", "C)", "C((C)", "[CH3", "[]", "[Fe]", "C1C1", "C11", "1CC", "C..C",
         "C=", "C=.C", "C%1", "C!", "[C@H](N)C", "[13C]", "C/C=C/C", "*CC", ".C"],
    )
    def test_syntax_errors(self, bad):
        with pytest.raises(SmilesSyntaxError):
            parse_smiles(bad)

    def test_unsupported_features_named(self):
        with pytest.raises(SmilesSyntaxError, match="stereo"):
            parse_smiles("C/C=C/C")
        with pytest.raises(SmilesSyntaxError, match="isotope"):
            parse_smiles("[13CH4]")
        with pytest.raises(SmilesSyntaxError, match="wildcard"):
            parse_smiles("C*")

    def test_valence_error(self):
        with pytest.raises(ValenceError):
            parse_smiles("C(C)(C)(C)(C)C")

    def test_acyclic_aromatic_rejected(self):
        with pytest.raises(AromaticityError):
            parse_smiles("C:C")

    def test_empty_input(self):
        assert len(parse_smiles("").atoms) == 0
        assert write_smiles(parse_smiles("")) == ""


class TestCanonicalWriter:
    def test_notation_independence(self):
        assert canonical_smiles("OCC") == canonical_smiles("CCO")

    def test_single_carbon(self):
        assert canonical_smiles("C") == "C"

    def test_aromatic_round_trip(self):
        out = canonical_smiles("c1ccccc1")
        mol = parse_smiles(out)
        assert len(mol.atoms) == 6
        assert all(a.aromatic and a.in_ring for a in mol.atoms)

    def test_idempotent_on_corpus(self, corpus_smiles):
        for smi in corpus_smiles:
            once = canonical_smiles(smi)
            assert canonical_smiles(once) == once

    def test_permutation_invariance_on_corpus(self, corpus_mols):
        rng = random.Random(3)
        for mol in corpus_mols:
            reference = write_smiles(mol)
            for _ in range(5):
                assert write_smiles(permute_molecule(mol, rng)) == reference

    def test_round_trip_preserves_graph(self, corpus_mols):
        for mol in corpus_mols:
            again = parse_smiles(write_smiles(mol))
            assert len(again.atoms) == len(mol.atoms)
            assert len(again.bonds) == len(mol.bonds)
            assert again.total_h() == mol.total_h()
            assert write_smiles(again) == write_smiles(mol)

    def test_charged_round_trip(self):
        for smi in ("[NH4+]", "[O-]C(=O)C", "C[N+](C)(C)C", "[O-]S(=O)(=O)[O-]"):
            mol = parse_smiles(smi)
            again = parse_smiles(write_smiles(mol))
            assert again.total_h() == mol.total_h()
            assert sorted(a.formal_charge for a in again.atoms) == sorted(
                a.formal_charge for a in mol.atoms
            )

    def test_component_order_is_canonical(self):
        assert canonical_smiles("CC.O") == canonical_smiles("O.CC")

    def test_explicit_hydrogen_atoms(self):
        mol = parse_smiles("[H]O[H]")
        assert len(mol.atoms) == 3
        assert canonical_smiles(write_smiles(mol)) == write_smiles(mol)


class TestFuzzTotality:
    ALPHABET = "CNOSPcnos()[]123456789=#-+%.ClBrIH@/\\*0bp "

    def test_random_bytes_never_crash(self):
        rng = random.Random(99)
        for _ in range(2000):
            length = rng.randint(0, 60)
            text = "".join(rng.choice(self.ALPHABET) for _ in range(length))
            started = time.monotonic()
            try:
                parse_smiles(text)
            except ChemserveError:
                pass
            assert time.monotonic() - started < 0.1

    def test_arbitrary_unicode_bytes(self):
        rng = random.Random(7)
        for _ in range(500):
            raw = bytes(rng.randrange(256) for _ in range(rng.randint(0, 40)))
            try:
                parse_smiles(raw.decode("latin-1"))
            except ChemserveError:
                pass
