"""Maximum common substructure across a list of molecules.

Pairwise search runs on the modular product of the two graphs: vertices
are compatible atom pairs, and a set of pairs is usable when it is
injective on both sides. Pairs sharing a bond of equal order on both
sides are "strongly" adjacent; the search grows candidate sets only
through strong adjacency (Koch-style branch and bound), so the common
subgraph stays connected. Multi-molecule input folds the pairwise search
left across the list, carrying the current common fragment as the query
side.

Candidate fragments must be expressible as real molecules: an aromatic
system only counts when the fragment keeps it on a ring, since a fragment
whose SMILES cannot be parsed back is useless to callers. When the node
budget runs out, the best fragment found so far is returned with
``completed`` false.
"""

from __future__ import annotations

from dataclasses import dataclass

from chemserve.errors import AromaticityError, InvalidParameter
from chemserve.formats.smiles import write_smiles
from chemserve.molgraph import BondOrder, MolBuilder, Molecule
from chemserve.search.substructure import AtomMapping, atoms_compatible, match_substructure

DEFAULT_NODE_LIMIT = 5_000_000


@dataclass(frozen=True)
class McsResult:
    smiles: str
    atom_count: int
    bond_count: int
    mappings: tuple[AtomMapping, ...]
    completed: bool


class _BudgetExhausted(Exception):
    pass


def _pairwise(
    qmol: Molecule, tmol: Molecule, atom_budget: int, budget: list[int]
) -> tuple[Molecule, bool]:
    """Largest connected common fragment of two molecules.

    `budget` is a one-element list holding the remaining node allowance,
    decremented in place so successive folds share it.
    """
    vertices = [
        (a, b)
        for a in range(len(qmol.atoms))
        for b in range(len(tmol.atoms))
        if atoms_compatible(qmol.atoms[a], tmol.atoms[b])
    ]
    nv = len(vertices)
    strong: list[set[int]] = [set() for _ in range(nv)]
    for i in range(nv):
        a, b = vertices[i]
        for j in range(i + 1, nv):
            c, d = vertices[j]
            if a == c or b == d:
                continue
            q_bond = qmol.bond_between(a, c)
            if q_bond is None:
                continue
            t_bond = tmol.bond_between(b, d)
            if t_bond is not None and q_bond.order is t_bond.order:
                strong[i].add(j)
                strong[j].add(i)

    def shared_order(a: int, c: int) -> BondOrder:
        bond = qmol.bond_between(a, c)
        assert bond is not None
        return bond.order

    def build(clique_ids: list[int]) -> Molecule | None:
        """Fragment molecule for a clique, or None when not expressible."""
        keep = sorted(a for a, _ in (vertices[i] for i in clique_ids))
        new_idx = {a: i for i, a in enumerate(keep)}
        id_set = set(clique_ids)
        builder = MolBuilder()
        for a in keep:
            atom = qmol.atoms[a]
            builder.add_atom(atom.symbol, atom.formal_charge, atom.aromatic)
        for i in clique_ids:
            for j in strong[i]:
                if j > i and j in id_set:
                    a, c = vertices[i][0], vertices[j][0]
                    builder.add_bond(new_idx[a], new_idx[c], shared_order(a, c))
        try:
            return builder.finalize()
        except AromaticityError:
            return None

    best_atoms = 0
    best_bonds = -1
    best_clique: list[int] = []

    def consider(clique_ids: list[int], bonds: int) -> None:
        nonlocal best_atoms, best_bonds, best_clique
        if (len(clique_ids), bonds) <= (best_atoms, best_bonds):
            return
        if build(clique_ids) is None:
            return
        best_atoms = len(clique_ids)
        best_bonds = bonds
        best_clique = list(clique_ids)

    def expand(clique_ids: list[int], bonds: int, pool: list[int], dangling: list[int]) -> None:
        budget[0] -= 1
        if budget[0] < 0:
            raise _BudgetExhausted
        consider(clique_ids, bonds)
        if atom_budget and len(clique_ids) >= atom_budget:
            return
        # every pool/dangling vertex could still join: upper-bounds the size
        if len(clique_ids) + len(pool) + len(dangling) < best_atoms:
            return
        while pool:
            u = pool.pop(0)
            ua, ub = vertices[u]
            new_pool = [w for w in pool if vertices[w][0] != ua and vertices[w][1] != ub]
            new_dangling = []
            for w in dangling:
                wa, wb = vertices[w]
                if wa == ua or wb == ub:
                    continue
                if w in strong[u]:
                    new_pool.append(w)
                else:
                    new_dangling.append(w)
            expand(
                clique_ids + [u],
                bonds + sum(1 for r in clique_ids if u in strong[r]),
                new_pool,
                new_dangling,
            )

    completed = True
    try:
        for v in range(nv):
            va, vb = vertices[v]
            pool = sorted(u for u in strong[v] if u > v)
            dangling = [
                u
                for u in range(v + 1, nv)
                if u not in strong[v] and vertices[u][0] != va and vertices[u][1] != vb
            ]
            expand([v], 0, pool, dangling)
    except _BudgetExhausted:
        completed = False

    if best_atoms == 0:
        return MolBuilder().finalize(), completed
    fragment = build(best_clique)
    assert fragment is not None
    return fragment, completed


def max_common_substructure(
    mols: list[Molecule], atom_budget: int = 0, node_limit: int = DEFAULT_NODE_LIMIT
) -> McsResult:
    """Largest connected common subgraph, ties broken by bond count.

    atom_budget > 0 caps the fragment size (0 means unlimited); node_limit
    bounds the total number of search nodes across the fold.
    """
    if len(mols) < 2:
        raise InvalidParameter("maximum common substructure needs at least 2 molecules")
    budget = [node_limit]
    completed = True
    current = mols[0]
    for other in mols[1:]:
        current, done = _pairwise(current, other, atom_budget, budget)
        completed = completed and done
        if len(current.atoms) == 0:
            break

    if len(current.atoms) == 0:
        return McsResult("", 0, 0, tuple(AtomMapping(()) for _ in mols), completed)

    mappings = []
    for mol in mols:
        found = match_substructure(current, mol, max_matches=1)
        assert found, "common fragment must embed into every input"
        mappings.append(found[0])
    return McsResult(
        write_smiles(current),
        len(current.atoms),
        len(current.bonds),
        tuple(mappings),
        completed,
    )
