"""Chemical file formats: SMILES, MDL molfile V2000, SD files."""

from chemserve.formats.ctab import parse_ctab, write_ctab
from chemserve.formats.sdf import SdfEntry, parse_sdf, write_sdf
from chemserve.formats.smiles import parse_smiles, write_smiles

__all__ = [
    "SdfEntry",
    "parse_ctab",
    "parse_sdf",
    "parse_smiles",
    "write_ctab",
    "write_sdf",
    "write_smiles",
]


def canonical_smiles(text: str) -> str:
    """Parse a SMILES string and return its canonical form."""
    return write_smiles(parse_smiles(text))
