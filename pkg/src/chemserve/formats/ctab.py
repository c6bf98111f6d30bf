"""MDL molfile V2000 connection tables.

Reading discards coordinates; formal charges come from ``M  CHG`` property
lines (the legacy charge column is ignored). Writing emits zeroed 2D
coordinates in the fixed V2000 column layout: geometry is interchange
ballast here, not information.
"""

from __future__ import annotations

from chemserve.errors import CapacityError, FormatError, UnsupportedElement
from chemserve.molgraph import BondOrder, MolBuilder, Molecule

_BOND_TYPE = {1: BondOrder.SINGLE, 2: BondOrder.DOUBLE, 3: BondOrder.TRIPLE, 4: BondOrder.AROMATIC}
_TYPE_FOR_ORDER = {v: k for k, v in _BOND_TYPE.items()}

MAX_COUNT = 999  # V2000 atom/bond fields are three columns wide


def parse_ctab(text: str, name: str | None = None) -> Molecule:
    """Parse a single V2000 connection table (through its ``M  END``)."""
    lines = text.replace("\r\n", "\n").split("\n")
    if len(lines) < 4:
        raise FormatError("connection table shorter than header plus counts", line=len(lines))

    counts = lines[3]
    if "V2000" not in counts:
        raise FormatError("counts line does not declare V2000", line=4)
    try:
        n_atoms = int(counts[0:3])
        n_bonds = int(counts[3:6])
    except ValueError:
        raise FormatError("malformed counts line", line=4) from None
    if n_atoms < 0 or n_bonds < 0:
        raise FormatError("negative counts", line=4)

    atom_start = 4
    bond_start = atom_start + n_atoms
    if len(lines) < bond_start + n_bonds:
        raise FormatError("atom or bond block truncated", line=len(lines))

    builder = MolBuilder()
    for i in range(n_atoms):
        line = lines[atom_start + i]
        lineno = atom_start + i + 1
        if len(line) < 32:
            raise FormatError("atom line too short", line=lineno)
        try:
            float(line[0:10])
            float(line[10:20])
            float(line[20:30])
        except ValueError:
            raise FormatError("malformed atom coordinates", line=lineno) from None
        symbol = line[31:34].strip()
        try:
            builder.add_atom(symbol)
        except UnsupportedElement:
            raise FormatError(f"unknown element {symbol!r}", line=lineno) from None

    bond_orders: list[BondOrder] = []
    bond_pairs: list[tuple[int, int]] = []
    for i in range(n_bonds):
        line = lines[bond_start + i]
        lineno = bond_start + i + 1
        if len(line) < 9:
            raise FormatError("bond line too short", line=lineno)
        try:
            a = int(line[0:3])
            b = int(line[3:6])
            btype = int(line[6:9])
        except ValueError:
            raise FormatError("malformed bond line", line=lineno) from None
        if not (1 <= a <= n_atoms and 1 <= b <= n_atoms):
            raise FormatError(f"bond references atom out of range: {a}-{b}", line=lineno)
        if btype not in _BOND_TYPE:
            raise FormatError(f"unknown bond type {btype}", line=lineno)
        bond_pairs.append((a - 1, b - 1))
        bond_orders.append(_BOND_TYPE[btype])

    charges: dict[int, int] = {}
    saw_end = False
    for i in range(bond_start + n_bonds, len(lines)):
        line = lines[i]
        lineno = i + 1
        if line.rstrip() == "M  END":
            saw_end = True
            break
        if line.startswith("M  CHG"):
            fields = line.split()
            try:
                count = int(fields[2])
                entries = [int(x) for x in fields[3 : 3 + 2 * count]]
                if len(entries) != 2 * count:
                    raise ValueError
            except (IndexError, ValueError):
                raise FormatError("malformed M  CHG line", line=lineno) from None
            for j in range(count):
                aidx, chg = entries[2 * j] - 1, entries[2 * j + 1]
                if not (0 <= aidx < n_atoms):
                    raise FormatError("M  CHG references atom out of range", line=lineno)
                charges[aidx] = chg
    if not saw_end:
        raise FormatError('missing "M  END"', line=len(lines))

    for aidx, chg in charges.items():
        builder.set_formal_charge(aidx, chg)
    # V2000 has no atom aromaticity flag; derive it from aromatic bonds
    for bidx, (a, b) in enumerate(bond_pairs):
        if bond_orders[bidx] is BondOrder.AROMATIC:
            builder.set_aromatic(a)
            builder.set_aromatic(b)
    try:
        for (a, b), order in zip(bond_pairs, bond_orders):
            builder.add_bond(a, b, order)
    except ValueError as exc:
        raise FormatError(str(exc), line=bond_start + 1) from None

    header_name = lines[0].strip() or None
    return builder.finalize(name if name is not None else header_name)


def write_ctab(mol: Molecule) -> str:
    """Emit a V2000 connection table with zeroed coordinates."""
    if len(mol.atoms) > MAX_COUNT or len(mol.bonds) > MAX_COUNT:
        raise CapacityError(
            f"V2000 supports at most {MAX_COUNT} atoms/bonds, got "
            f"{len(mol.atoms)} atoms and {len(mol.bonds)} bonds"
        )
    out = [mol.name or "", "  chemserve", ""]
    out.append(f"{len(mol.atoms):3d}{len(mol.bonds):3d}  0  0  0  0  0  0  0  0999 V2000")
    for atom in mol.atoms:
        out.append(
            f"{0.0:10.4f}{0.0:10.4f}{0.0:10.4f} {atom.symbol:<3}"
            " 0  0  0  0  0  0  0  0  0  0  0  0"
        )
    for bond in mol.bonds:
        out.append(f"{bond.a + 1:3d}{bond.b + 1:3d}{_TYPE_FOR_ORDER[bond.order]:3d}  0")
    charged = [(i + 1, a.formal_charge) for i, a in enumerate(mol.atoms) if a.formal_charge]
    for i in range(0, len(charged), 8):
        chunk = charged[i : i + 8]
        out.append(
            f"M  CHG{len(chunk):3d}" + "".join(f"{idx:4d}{chg:4d}" for idx, chg in chunk)
        )
    out.append("M  END")
    return "\n".join(out) + "\n"
