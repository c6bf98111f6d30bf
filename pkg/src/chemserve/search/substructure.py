"""Subgraph matching: is the query contained in the target?

Backtracking search over injective, bond-preserving atom assignments
(a monomorphism: the target may have extra bonds between matched atoms).
Query atoms are ordered connectivity-first so each new atom is anchored to
an already-mapped neighbor whenever possible, and candidates are pruned on
degree and on the compatibility predicate.

Compatibility: equal atomic number and aromatic flag; a query charge of 0
matches any target charge, a nonzero query charge must match exactly; bond
orders must be equal.
"""

from __future__ import annotations

from dataclasses import dataclass

from chemserve.errors import InvalidParameter
from chemserve.molgraph import Atom, Molecule

DEFAULT_MAX_MATCHES = 1000


def atoms_compatible(query: Atom, target: Atom) -> bool:
    if query.atomic_number != target.atomic_number:
        return False
    if query.aromatic != target.aromatic:
        return False
    if query.formal_charge != 0 and query.formal_charge != target.formal_charge:
        return False
    return True


def bonds_compatible(query_order, target_order) -> bool:
    return query_order is target_order


@dataclass(frozen=True)
class AtomMapping:
    """Injective query-atom -> target-atom pairs, sorted by query index."""

    pairs: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


def _visit_order(query: Molecule) -> list[int]:
    """Connectivity-first ordering; new components start at max degree."""
    n = len(query.atoms)
    order: list[int] = []
    placed = [False] * n
    while len(order) < n:
        frontier = [
            i
            for i in range(n)
            if not placed[i] and any(placed[nbr] for nbr, _ in query.neighbors[i])
        ]
        if frontier:
            nxt = max(
                frontier,
                key=lambda i: (
                    sum(placed[nbr] for nbr, _ in query.neighbors[i]),
                    query.degree(i),
                    -i,
                ),
            )
        else:
            nxt = max(
                (i for i in range(n) if not placed[i]), key=lambda i: (query.degree(i), -i)
            )
        order.append(nxt)
        placed[nxt] = True
    return order


def match_substructure(
    query: Molecule, target: Molecule, max_matches: int = DEFAULT_MAX_MATCHES
) -> list[AtomMapping]:
    """Up to max_matches distinct embeddings of query into target."""
    if len(query.atoms) == 0:
        raise InvalidParameter("substructure query must contain at least one atom")
    if max_matches < 1:
        raise InvalidParameter(f"max_matches must be >= 1, got {max_matches}")
    nq, nt = len(query.atoms), len(target.atoms)
    if nq > nt:
        return []

    order = _visit_order(query)
    # for each position: bonds from order[pos] back to already-ordered atoms
    pos_of = {atom: pos for pos, atom in enumerate(order)}
    back_bonds: list[list[tuple[int, int]]] = []
    for pos, qa in enumerate(order):
        back = [
            (nbr, bidx)
            for nbr, bidx in query.neighbors[qa]
            if pos_of[nbr] < pos
        ]
        back_bonds.append(back)

    assignment: dict[int, int] = {}
    used = [False] * nt
    results: list[AtomMapping] = []

    def candidates(pos: int):
        qa = order[pos]
        back = back_bonds[pos]
        if back:
            anchor, _ = back[0]
            return [nbr for nbr, _ in target.neighbors[assignment[anchor]]]
        return range(nt)

    def extend(pos: int) -> bool:
        if pos == nq:
            results.append(
                AtomMapping(tuple(sorted((qa, ta) for qa, ta in assignment.items())))
            )
            return len(results) >= max_matches
        qa = order[pos]
        q_atom = query.atoms[qa]
        q_degree = query.degree(qa)
        for ta in candidates(pos):
            if used[ta]:
                continue
            if not atoms_compatible(q_atom, target.atoms[ta]):
                continue
            if target.degree(ta) < q_degree:
                continue
            ok = True
            for nbr, bidx in back_bonds[pos]:
                t_bond = target.bond_between(assignment[nbr], ta)
                if t_bond is None or not bonds_compatible(
                    query.bonds[bidx].order, t_bond.order
                ):
                    ok = False
                    break
            if not ok:
                continue
            assignment[qa] = ta
            used[ta] = True
            done = extend(pos + 1)
            used[ta] = False
            del assignment[qa]
            if done:
                return True
        return False

    extend(0)
    return results


def has_substructure(query: Molecule, target: Molecule) -> bool:
    return bool(match_substructure(query, target, max_matches=1))
