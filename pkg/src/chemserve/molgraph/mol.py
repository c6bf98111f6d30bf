"""Molecular graph core: atoms, bonds, ring perception, implicit hydrogens.

Molecules are built through :class:`MolBuilder` and frozen by
``finalize()``. A finalized :class:`Molecule` is immutable and safe to
share across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from chemserve.errors import AromaticityError, ValenceError
from chemserve.molgraph.elements import Element, adjusted_valences, element


class BondOrder(enum.Enum):
    SINGLE = "single"
    DOUBLE = "double"
    TRIPLE = "triple"
    AROMATIC = "aromatic"

    @property
    def code(self) -> int:
        """Small integer used in hashing and ctab bond blocks."""
        return _ORDER_CODE[self]

    @property
    def valence(self) -> float:
        """Contribution to an atom's bond order sum."""
        return 1.5 if self is BondOrder.AROMATIC else float(self.code)


_ORDER_CODE = {
    BondOrder.SINGLE: 1,
    BondOrder.DOUBLE: 2,
    BondOrder.TRIPLE: 3,
    BondOrder.AROMATIC: 4,
}

ORDER_BY_CODE = {v: k for k, v in _ORDER_CODE.items()}


@dataclass(frozen=True)
class Atom:
    element: Element
    formal_charge: int = 0
    aromatic: bool = False
    # Set only when the input notation fixed the hydrogen count (bracket
    # atoms in SMILES). None means "derive from valence".
    explicit_h: int | None = None
    implicit_h: int = 0
    in_ring: bool = False

    @property
    def atomic_number(self) -> int:
        return self.element.atomic_number

    @property
    def symbol(self) -> str:
        return self.element.symbol


@dataclass(frozen=True)
class Bond:
    a: int
    b: int
    order: BondOrder
    in_ring: bool = False

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a


@dataclass(frozen=True)
class RingInfo:
    cycle_rank: int
    atom_in_ring: tuple[bool, ...]
    bond_in_ring: tuple[bool, ...]


def perceive_rings(n_atoms: int, pairs: list[tuple[int, int]]) -> RingInfo:
    """Classify ring membership for an undirected graph.

    cycle_rank = |bonds| - |atoms| + components. A bond is in a ring iff it
    is not a bridge; an atom is in a ring iff one of its bonds is. Bridges
    are found with an iterative DFS low-link pass.
    """
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_atoms)]
    for bidx, (a, b) in enumerate(pairs):
        adj[a].append((b, bidx))
        adj[b].append((a, bidx))

    disc = [-1] * n_atoms
    low = [0] * n_atoms
    bond_in_ring = [False] * len(pairs)
    timer = 0
    components = 0

    for root in range(n_atoms):
        if disc[root] != -1:
            continue
        components += 1
        # stack entries: (node, incoming bond index, iterator position)
        stack = [(root, -1, 0)]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            node, in_bond, pos = stack[-1]
            if pos < len(adj[node]):
                stack[-1] = (node, in_bond, pos + 1)
                nbr, bidx = adj[node][pos]
                if bidx == in_bond:
                    continue
                if disc[nbr] == -1:
                    disc[nbr] = low[nbr] = timer
                    timer += 1
                    stack.append((nbr, bidx, 0))
                else:
                    # back edge: lies on a cycle
                    low[node] = min(low[node], disc[nbr])
                    if disc[nbr] < disc[node]:
                        bond_in_ring[bidx] = True
            else:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[node])
                    if low[node] > disc[parent]:
                        pass  # bridge: stays False
                    else:
                        bond_in_ring[in_bond] = True

    atom_in_ring = [False] * n_atoms
    for bidx, (a, b) in enumerate(pairs):
        if bond_in_ring[bidx]:
            atom_in_ring[a] = True
            atom_in_ring[b] = True

    cycle_rank = len(pairs) - n_atoms + components
    return RingInfo(cycle_rank, tuple(atom_in_ring), tuple(bond_in_ring))


def fill_implicit_h(
    elem: Element, formal_charge: int, bond_order_sum: float, aromatic_bond_count: int
) -> int:
    """Implicit hydrogen count for an atom whose H count is not fixed.

    Aromatic bonds contribute 1.5 to the bond order sum, which is floored
    once per atom. Atoms without aromatic bonds fill up to the smallest
    adjusted default valence >= the sum (so sulfonyl S reaches 6). Atoms
    with aromatic bonds clamp against their lowest valence instead of
    hopping to a higher one: that yields 1 H on benzene carbons and none on
    furan/thiophene heteroatoms or ring atoms carrying a substituent.

    Overbonding is judged with aromatic bonds at their Kekule minimum of
    1, so a sum no Kekule assignment could support raises ValenceError.
    """
    valences = sorted(adjusted_valences(elem, formal_charge))
    total = int(bond_order_sum)
    minimal = int(bond_order_sum - 0.5 * aromatic_bond_count)
    if minimal > valences[-1]:
        raise ValenceError(
            f"{elem.symbol} with bond order sum {minimal} exceeds maximal valence {valences[-1]}"
        )
    if aromatic_bond_count:
        return max(0, valences[0] - total)
    for v in valences:
        if v >= total:
            return v - total
    raise ValenceError(
        f"{elem.symbol} with bond order sum {total} exceeds maximal valence {valences[-1]}"
    )


class Molecule:
    """Immutable labeled molecular graph with perceived rings and hydrogens."""

    __slots__ = ("atoms", "bonds", "name", "neighbors", "ring_info")

    def __init__(
        self,
        atoms: tuple[Atom, ...],
        bonds: tuple[Bond, ...],
        name: str | None,
        ring_info: RingInfo,
    ):
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "bonds", bonds)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "ring_info", ring_info)
        # per-atom list of (neighbor atom index, bond index)
        nbrs: list[list[tuple[int, int]]] = [[] for _ in atoms]
        for bidx, bond in enumerate(bonds):
            nbrs[bond.a].append((bond.b, bidx))
            nbrs[bond.b].append((bond.a, bidx))
        object.__setattr__(self, "neighbors", tuple(tuple(n) for n in nbrs))

    def __setattr__(self, name, value):
        raise AttributeError("Molecule is immutable once finalized")

    def __len__(self) -> int:
        return len(self.atoms)

    def degree(self, idx: int) -> int:
        return len(self.neighbors[idx])

    def bond_between(self, a: int, b: int) -> Bond | None:
        for nbr, bidx in self.neighbors[a]:
            if nbr == b:
                return self.bonds[bidx]
        return None

    def components(self) -> list[list[int]]:
        """Connected components as lists of atom indices, in input order."""
        seen = [False] * len(self.atoms)
        out = []
        for start in range(len(self.atoms)):
            if seen[start]:
                continue
            comp = [start]
            seen[start] = True
            queue = [start]
            while queue:
                node = queue.pop()
                for nbr, _ in self.neighbors[node]:
                    if not seen[nbr]:
                        seen[nbr] = True
                        comp.append(nbr)
                        queue.append(nbr)
            out.append(sorted(comp))
        return out

    def total_h(self) -> int:
        """Total hydrogen count: implicit plus H atoms in the graph."""
        return sum(a.implicit_h for a in self.atoms) + sum(
            1 for a in self.atoms if a.atomic_number == 1
        )

    def __repr__(self) -> str:
        return f"Molecule(atoms={len(self.atoms)}, bonds={len(self.bonds)})"


@dataclass
class _ProtoAtom:
    element: Element
    formal_charge: int = 0
    aromatic: bool = False
    explicit_h: int | None = None


@dataclass
class MolBuilder:
    """Mutable construction site for a Molecule; confined to one thread."""

    _atoms: list[_ProtoAtom] = field(default_factory=list)
    _bonds: list[tuple[int, int, BondOrder]] = field(default_factory=list)
    _pairs: set[frozenset[int]] = field(default_factory=set)

    def add_atom(
        self,
        symbol: str,
        formal_charge: int = 0,
        aromatic: bool = False,
        explicit_h: int | None = None,
    ) -> int:
        self._atoms.append(_ProtoAtom(element(symbol), formal_charge, aromatic, explicit_h))
        return len(self._atoms) - 1

    def add_bond(self, a: int, b: int, order: BondOrder) -> int:
        if a == b:
            raise ValueError(f"self-bond on atom {a}")
        if not (0 <= a < len(self._atoms) and 0 <= b < len(self._atoms)):
            raise ValueError(f"bond references unknown atom: ({a}, {b})")
        pair = frozenset((a, b))
        if pair in self._pairs:
            raise ValueError(f"duplicate bond between atoms {a} and {b}")
        self._pairs.add(pair)
        self._bonds.append((a, b, order))
        return len(self._bonds) - 1

    @property
    def n_atoms(self) -> int:
        return len(self._atoms)

    def set_formal_charge(self, idx: int, charge: int) -> None:
        self._atoms[idx].formal_charge = charge

    def set_aromatic(self, idx: int, aromatic: bool = True) -> None:
        self._atoms[idx].aromatic = aromatic

    def finalize(self, name: str | None = None) -> Molecule:
        """Perceive rings, check aromatic placement, assign hydrogens, freeze."""
        ring = perceive_rings(len(self._atoms), [(a, b) for a, b, _ in self._bonds])

        for bidx, (a, b, order) in enumerate(self._bonds):
            if order is BondOrder.AROMATIC and not ring.bond_in_ring[bidx]:
                raise AromaticityError(
                    f"aromatic bond between atoms {a} and {b} is not in a ring"
                )
        for aidx, proto in enumerate(self._atoms):
            if proto.aromatic and not ring.atom_in_ring[aidx]:
                raise AromaticityError(f"aromatic atom {aidx} is not in a ring")

        order_sum = [0.0] * len(self._atoms)
        arom_count = [0] * len(self._atoms)
        for a, b, order in self._bonds:
            order_sum[a] += order.valence
            order_sum[b] += order.valence
            if order is BondOrder.AROMATIC:
                arom_count[a] += 1
                arom_count[b] += 1

        atoms = []
        for aidx, proto in enumerate(self._atoms):
            # the valence check applies even when H is fixed by the input
            filled = fill_implicit_h(
                proto.element, proto.formal_charge, order_sum[aidx], arom_count[aidx]
            )
            implicit = proto.explicit_h if proto.explicit_h is not None else filled
            atoms.append(
                Atom(
                    element=proto.element,
                    formal_charge=proto.formal_charge,
                    aromatic=proto.aromatic,
                    explicit_h=proto.explicit_h,
                    implicit_h=implicit,
                    in_ring=ring.atom_in_ring[aidx],
                )
            )

        bonds = tuple(
            Bond(a, b, order, in_ring=ring.bond_in_ring[bidx])
            for bidx, (a, b, order) in enumerate(self._bonds)
        )
        return Molecule(tuple(atoms), bonds, name, ring)
