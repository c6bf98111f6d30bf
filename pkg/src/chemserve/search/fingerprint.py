"""Circular fingerprints, path-based screening bits, Tanimoto similarity.

The similarity fingerprint hashes atom-centered neighborhoods of
increasing radius (ECFP-style). The screening fingerprint hashes linear
atom/bond label paths instead: every path in a query maps onto an
identically-labeled path in any molecule that contains the query, so
``screen_bits(query) subset-of screen_bits(target)`` whenever a
substructure match exists. Circular environment bits do not carry that
guarantee, which is why the two variants are kept apart.

Hashing is fixed and platform-independent: each integer is scrambled with
the SplitMix64 finalizer (constants 0xbf58476d1ce4e5b9, 0x94d049bb133111eb;
Steele, Lea & Flood 2014) and folded left-to-right FNV-1a style with
offset 0xcbf29ce484222325 and prime 0x100000001b3.
"""

from __future__ import annotations

from dataclasses import dataclass

from chemserve.errors import InvalidParameter
from chemserve.molgraph import Molecule

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
SPLITMIX_C1 = 0xBF58476D1CE4E5B9
SPLITMIX_C2 = 0x94D049BB133111EB
_MASK = 0xFFFFFFFFFFFFFFFF

DEFAULT_RADIUS = 2
DEFAULT_NBITS = 2048
SCREEN_PATH_BONDS = 4


def _scramble(v: int) -> int:
    """SplitMix64 finalizer; negatives fold to their two's complement."""
    v &= _MASK
    v = ((v ^ (v >> 30)) * SPLITMIX_C1) & _MASK
    v = ((v ^ (v >> 27)) * SPLITMIX_C2) & _MASK
    return v ^ (v >> 31)


def mix64(*values: int) -> int:
    """Order-sensitive 64-bit hash of an integer tuple."""
    h = FNV_OFFSET
    for v in values:
        h = ((h ^ _scramble(v)) * FNV_PRIME) & _MASK
    return h


@dataclass(frozen=True)
class Fingerprint:
    nbits: int
    bits: int  # bit j set <=> an environment hashing to j is present

    def __post_init__(self):
        if self.nbits <= 0 or self.nbits & (self.nbits - 1):
            raise InvalidParameter(f"nbits must be a power of two, got {self.nbits}")

    @property
    def popcount(self) -> int:
        return self.bits.bit_count()

    def contains(self, other: "Fingerprint") -> bool:
        """True when every bit of `other` is set here."""
        return other.bits & ~self.bits == 0

    def to_hex(self) -> str:
        return format(self.bits, f"0{self.nbits // 4}x")

    @classmethod
    def from_hex(cls, nbits: int, text: str) -> "Fingerprint":
        return cls(nbits, int(text, 16))


def _atom_seed(mol: Molecule, idx: int) -> int:
    atom = mol.atoms[idx]
    return mix64(
        atom.atomic_number,
        mol.degree(idx),
        atom.implicit_h,
        atom.formal_charge,
        int(atom.in_ring),
        int(atom.aromatic),
    )


def fingerprint(mol: Molecule, radius: int = DEFAULT_RADIUS, nbits: int = DEFAULT_NBITS) -> Fingerprint:
    """Hash each atom's neighborhood at radii 0..radius into a bit vector."""
    if radius < 0:
        raise InvalidParameter(f"radius must be >= 0, got {radius}")
    if nbits <= 0 or nbits & (nbits - 1):
        raise InvalidParameter(f"nbits must be a power of two, got {nbits}")

    bits = 0
    inv = [_atom_seed(mol, i) for i in range(len(mol.atoms))]
    for ident in inv:
        bits |= 1 << (ident % nbits)
    for _ in range(radius):
        new = []
        for idx in range(len(mol.atoms)):
            pairs = sorted(
                (mol.bonds[bidx].order.code, inv[nbr]) for nbr, bidx in mol.neighbors[idx]
            )
            flat = [inv[idx]]
            for code, nbr_inv in pairs:
                flat.append(code)
                flat.append(nbr_inv)
            new.append(mix64(*flat))
        inv = new
        for ident in inv:
            bits |= 1 << (ident % nbits)
    return Fingerprint(nbits, bits)


def screen_fingerprint(
    mol: Molecule, max_bonds: int = SCREEN_PATH_BONDS, nbits: int = DEFAULT_NBITS
) -> Fingerprint:
    """Linear-path bits: sound for subset screening of substructure queries.

    Atom labels reduce to (atomic number, aromatic flag) and bond labels to
    the order code, mirroring what the substructure compatibility predicate
    requires of every match. Each simple path of up to `max_bonds` bonds
    contributes one bit; a path is hashed from the endpoint that yields the
    lexicographically smaller label sequence, so direction does not matter.
    """
    if nbits <= 0 or nbits & (nbits - 1):
        raise InvalidParameter(f"nbits must be a power of two, got {nbits}")

    labels = [(a.atomic_number, int(a.aromatic)) for a in mol.atoms]
    bits = 0

    def emit(items: tuple) -> None:
        nonlocal bits
        if items <= items[::-1]:
            flat = []
            for item in items:
                if isinstance(item, tuple):
                    flat.extend(item)
                else:
                    flat.append(item)
            bits |= 1 << (mix64(*flat) % nbits)

    def walk(path: list[int], items: tuple) -> None:
        if len(path) - 1 >= max_bonds:
            return
        last = path[-1]
        for nbr, bidx in mol.neighbors[last]:
            if nbr in path:
                continue
            ext = items + (mol.bonds[bidx].order.code, labels[nbr])
            emit(ext)
            path.append(nbr)
            walk(path, ext)
            path.pop()

    for start in range(len(mol.atoms)):
        seed = (labels[start],)
        emit(seed)
        walk([start], seed)
    return Fingerprint(nbits, bits)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|A & B| / |A | B|; 1.0 when both fingerprints are empty."""
    if a.nbits != b.nbits:
        raise InvalidParameter(f"fingerprint width mismatch: {a.nbits} vs {b.nbits}")
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 1.0
    return (a.bits & b.bits).bit_count() / union
