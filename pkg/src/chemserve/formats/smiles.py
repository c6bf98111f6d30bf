"""SMILES parsing and canonical SMILES output.

Supported dialect: organic-subset atoms (B C N O P S F Cl Br I), aromatic
b c n o s p, bracket atoms carrying symbol, hydrogen count and charge,
bond symbols ``- = # :``, parenthesised branches, ring closures 1-9 and
%nn, and dot-separated components. Stereo markers, isotopes and wildcard
atoms are rejected with an error naming the feature: an honest subset
beats silent misparsing.

A bond written without a symbol between two aromatic atoms becomes
aromatic when it lies on a ring and single otherwise, so biaryl linkages
parse without an explicit ``-``.
"""

from __future__ import annotations

import itertools
import re

from chemserve.errors import SmilesSyntaxError
from chemserve.molgraph import (
    AROMATIC_SYMBOLS,
    BondOrder,
    MolBuilder,
    Molecule,
    ORGANIC_SUBSET,
    canonical_ranks,
    fill_implicit_h,
    perceive_rings,
)

_BOND_CHARS = {
    "-": BondOrder.SINGLE,
    "=": BondOrder.DOUBLE,
    "#": BondOrder.TRIPLE,
    ":": BondOrder.AROMATIC,
}
_SYMBOL_FOR_ORDER = {v: k for k, v in _BOND_CHARS.items()}

_BRACKET_RE = re.compile(
    r"^(?P<symbol>Cl|Br|Si|[BCNOPSFIH]|b|c|n|o|s|p)"
    r"(?P<hcount>H\d*)?"
    r"(?P<charge>\+\d+|-\d+|\++|-+)?$"
)


def _parse_bracket(body: str, pos: int) -> tuple[str, bool, int, int]:
    """Parse a bracket-atom body -> (symbol, aromatic, explicit_h, charge)."""
    if body and body[0].isdigit():
        raise SmilesSyntaxError(pos, "isotopes are not supported")
    if "@" in body:
        raise SmilesSyntaxError(pos, "stereochemistry markers are not supported")
    if "*" in body:
        raise SmilesSyntaxError(pos, "wildcard atoms are not supported")
    m = _BRACKET_RE.match(body)
    if m is None:
        raise SmilesSyntaxError(pos, f"invalid bracket atom [{body}]")
    symbol = m.group("symbol")
    aromatic = symbol in AROMATIC_SYMBOLS
    if aromatic:
        symbol = symbol.upper()

    h = m.group("hcount")
    if symbol == "H" and h is not None:
        raise SmilesSyntaxError(pos, "hydrogen atom cannot carry an H count")
    hcount = 0
    if h is not None:
        hcount = int(h[1:]) if len(h) > 1 else 1

    charge = 0
    c = m.group("charge")
    if c is not None:
        if c[0] == "+":
            charge = int(c[1:]) if c[1:].isdigit() else len(c)
        else:
            charge = -(int(c[1:]) if c[1:].isdigit() else len(c))
        if abs(charge) > 9:
            raise SmilesSyntaxError(pos, f"charge magnitude {abs(charge)} out of range")
    return symbol, aromatic, hcount, charge


def parse_smiles(text: str, name: str | None = None) -> Molecule:
    """Parse a SMILES string into a finalized Molecule.

    Raises SmilesSyntaxError with the offending position, ValenceError when
    explicit bonds exceed the supported valence, or AromaticityError when
    aromatic atoms or bonds end up outside a ring.
    """
    s = text.strip()
    builder = MolBuilder()
    aromatic_flags: list[bool] = []
    # bonds staged as (a, b, order-or-None) so unmarked bonds can be
    # resolved against ring membership once the whole graph is known
    staged: list[tuple[int, int, BondOrder | None]] = []
    pairs_seen: set[frozenset[int]] = set()

    prev: int | None = None
    pending: BondOrder | None = None
    pending_set = False
    branch_stack: list[int] = []
    # closure digit -> (atom, bond order, order written?, position)
    open_rings: dict[int, tuple[int, BondOrder | None, bool, int]] = {}

    def stage_bond(a: int, b: int, order: BondOrder | None, pos: int) -> None:
        if a == b:
            raise SmilesSyntaxError(pos, "ring closure bonds an atom to itself")
        pair = frozenset((a, b))
        if pair in pairs_seen:
            raise SmilesSyntaxError(pos, "duplicate bond between the same atoms")
        pairs_seen.add(pair)
        staged.append((a, b, order))

    def add_atom(symbol: str, aromatic: bool, hcount: int | None, charge: int, pos: int) -> None:
        nonlocal prev, pending, pending_set
        idx = builder.add_atom(symbol, charge, aromatic, hcount)
        aromatic_flags.append(aromatic)
        if prev is not None:
            stage_bond(prev, idx, pending if pending_set else None, pos)
        prev = idx
        pending = None
        pending_set = False

    def close_ring(num: int, pos: int) -> None:
        nonlocal pending, pending_set
        if prev is None:
            raise SmilesSyntaxError(pos, "ring closure digit before any atom")
        if num in open_rings:
            other, other_order, other_set, _ = open_rings.pop(num)
            if other_set and pending_set and other_order is not pending:
                raise SmilesSyntaxError(pos, f"conflicting bond orders on ring closure {num}")
            order = pending if pending_set else other_order
            stage_bond(other, prev, order, pos)
        else:
            open_rings[num] = (prev, pending, pending_set, pos)
        pending = None
        pending_set = False

    i = 0
    n = len(s)
    while i < n:
        ch = s[i]
        if ch == "[":
            end = s.find("]", i + 1)
            if end == -1:
                raise SmilesSyntaxError(i, "unterminated bracket atom")
            symbol, aromatic, hcount, charge = _parse_bracket(s[i + 1 : end], i)
            add_atom(symbol, aromatic, hcount, charge, i)
            i = end + 1
        elif ch in "/\\":
            raise SmilesSyntaxError(i, "stereochemistry markers are not supported")
        elif ch == "*":
            raise SmilesSyntaxError(i, "wildcard atoms are not supported")
        elif ch in _BOND_CHARS:
            if prev is None or pending_set:
                raise SmilesSyntaxError(i, "bond symbol without a preceding atom")
            pending = _BOND_CHARS[ch]
            pending_set = True
            i += 1
        elif ch == "(":
            if prev is None:
                raise SmilesSyntaxError(i, "branch opened before any atom")
            if pending_set:
                raise SmilesSyntaxError(i, "bond symbol before branch opening")
            branch_stack.append(prev)
            i += 1
        elif ch == ")":
            if not branch_stack:
                raise SmilesSyntaxError(i, "unbalanced closing parenthesis")
            if pending_set:
                raise SmilesSyntaxError(i, "dangling bond symbol before branch close")
            prev = branch_stack.pop()
            i += 1
        elif ch == ".":
            if prev is None:
                raise SmilesSyntaxError(i, "component separator without a preceding atom")
            if pending_set:
                raise SmilesSyntaxError(i, "bond symbol before component separator")
            if branch_stack:
                raise SmilesSyntaxError(i, "component separator inside a branch")
            prev = None
            i += 1
        elif ch.isdigit():
            close_ring(int(ch), i)
            i += 1
        elif ch == "%":
            if i + 2 >= n or not s[i + 1 : i + 3].isdigit():
                raise SmilesSyntaxError(i, "%nn ring closure needs two digits")
            close_ring(int(s[i + 1 : i + 3]), i)
            i += 3
        elif ch == "C" and i + 1 < n and s[i + 1] == "l":
            add_atom("Cl", False, None, 0, i)
            i += 2
        elif ch == "B" and i + 1 < n and s[i + 1] == "r":
            add_atom("Br", False, None, 0, i)
            i += 2
        elif ch in "BCNOPSFI":
            add_atom(ch, False, None, 0, i)
            i += 1
        elif ch in "bcnosp":
            add_atom(ch.upper(), True, None, 0, i)
            i += 1
        else:
            raise SmilesSyntaxError(i, f"unexpected character {ch!r}")

    if pending_set:
        raise SmilesSyntaxError(n, "trailing bond symbol")
    if branch_stack:
        raise SmilesSyntaxError(n, "unbalanced opening parenthesis")
    if open_rings:
        num, (_, _, _, pos) = min(open_rings.items(), key=lambda kv: kv[1][3])
        raise SmilesSyntaxError(pos, f"unmatched ring closure {num}")

    ring = perceive_rings(builder.n_atoms, [(a, b) for a, b, _ in staged])
    for bidx, (a, b, order) in enumerate(staged):
        if order is None:
            if aromatic_flags[a] and aromatic_flags[b] and ring.bond_in_ring[bidx]:
                order = BondOrder.AROMATIC
            else:
                order = BondOrder.SINGLE
        builder.add_bond(a, b, order)
    return builder.finalize(name)


def _needs_bracket(mol: Molecule, idx: int) -> bool:
    atom = mol.atoms[idx]
    if atom.symbol not in ORGANIC_SUBSET:
        return True
    if atom.formal_charge != 0:
        return True
    # a bare atom must let the reader re-derive the same hydrogen count
    order_sum = 0.0
    arom_count = 0
    for _, bidx in mol.neighbors[idx]:
        order = mol.bonds[bidx].order
        order_sum += order.valence
        if order is BondOrder.AROMATIC:
            arom_count += 1
    return fill_implicit_h(atom.element, 0, order_sum, arom_count) != atom.implicit_h


def _atom_token(mol: Molecule, idx: int) -> str:
    atom = mol.atoms[idx]
    symbol = atom.symbol.lower() if atom.aromatic else atom.symbol
    if not _needs_bracket(mol, idx):
        return symbol
    h = atom.implicit_h
    h_part = "" if h == 0 else ("H" if h == 1 else f"H{h}")
    c = atom.formal_charge
    if c == 0:
        c_part = ""
    else:
        sign = "+" if c > 0 else "-"
        c_part = sign if abs(c) == 1 else f"{sign}{abs(c)}"
    return f"[{symbol}{h_part}{c_part}]"


def _bond_token(mol: Molecule, bidx: int) -> str:
    bond = mol.bonds[bidx]
    both_aromatic = mol.atoms[bond.a].aromatic and mol.atoms[bond.b].aromatic
    if bond.order is BondOrder.SINGLE:
        return "-" if both_aromatic else ""
    if bond.order is BondOrder.AROMATIC:
        return "" if both_aromatic else ":"
    return _SYMBOL_FOR_ORDER[bond.order]


def _ring_label(num: int) -> str:
    return str(num) if num <= 9 else f"%{num:02d}"


def _write_component(mol: Molecule, ranks: list[int], start: int) -> str:
    """Emit one connected component, depth-first in canonical-rank order."""

    def nbrs(u: int):
        return sorted(mol.neighbors[u], key=lambda p: ranks[p[0]])

    # pass 1: classify bonds into tree edges and ring closures along the
    # canonical DFS order
    children: dict[int, list[int]] = {start: []}
    parent_bond: dict[int, int] = {}
    ring_bonds: set[int] = set()
    walked: set[int] = set()
    visited = {start}
    stack = [(start, iter(nbrs(start)))]
    while stack:
        u, it = stack[-1]
        item = next(it, None)
        if item is None:
            stack.pop()
            continue
        v, bidx = item
        if bidx in walked:
            continue
        walked.add(bidx)
        if v in visited:
            ring_bonds.add(bidx)
        else:
            visited.add(v)
            children[u].append(v)
            children[v] = []
            parent_bond[v] = bidx
            stack.append((v, iter(nbrs(v))))

    # pass 2: emit; ring closures numbered in order of first encounter
    numbers = itertools.count(1)
    num_for: dict[int, int] = {}
    out: list[str] = []
    work: list[tuple[str, object]] = [("atom", start)]
    while work:
        kind, payload = work.pop()
        if kind == "txt":
            out.append(payload)  # type: ignore[arg-type]
            continue
        u = payload  # type: ignore[assignment]
        if u != start:
            out.append(_bond_token(mol, parent_bond[u]))
        out.append(_atom_token(mol, u))
        for v, bidx in nbrs(u):
            if bidx not in ring_bonds:
                continue
            if bidx in num_for:
                out.append(_ring_label(num_for[bidx]))
            else:
                num_for[bidx] = next(numbers)
                out.append(_bond_token(mol, bidx) + _ring_label(num_for[bidx]))
        kids = children[u]
        for pos in range(len(kids) - 1, -1, -1):
            if pos == len(kids) - 1:
                work.append(("atom", kids[pos]))
            else:
                work.append(("txt", ")"))
                work.append(("atom", kids[pos]))
                work.append(("txt", "("))
    return "".join(out)


def write_smiles(mol: Molecule) -> str:
    """Canonical SMILES: a pure function of the abstract graph.

    Depth-first traversal starts at the atom of minimal canonical rank in
    each component and visits neighbors in canonical-rank order; component
    strings are sorted before joining with dots.
    """
    if len(mol.atoms) == 0:
        return ""
    ranks = canonical_ranks(mol)
    fragments = [
        _write_component(mol, ranks, min(comp, key=lambda i: ranks[i]))
        for comp in mol.components()
    ]
    return ".".join(sorted(fragments))
