"""Independent reference implementations used to check the engines.

Each oracle deliberately takes the dumbest correct route: plain
enumeration in input order, no candidate ordering, no screening, no
incremental bookkeeping. Slow is fine; agreeing with these is the point.
"""

from __future__ import annotations

import itertools

from chemserve.errors import AromaticityError
from chemserve.molgraph import BondOrder, MolBuilder, Molecule


def _atom_ok(query_atom, target_atom) -> bool:
    return (
        query_atom.atomic_number == target_atom.atomic_number
        and query_atom.aromatic == target_atom.aromatic
        and (query_atom.formal_charge == 0 or query_atom.formal_charge == target_atom.formal_charge)
    )


def count_embeddings(query: Molecule, target: Molecule, cap: int = 10**6) -> int:
    """Count injective bond-preserving maps by raw enumeration in index order."""
    nq, nt = len(query.atoms), len(target.atoms)
    if nq > nt:
        return 0
    count = 0

    def place(qa: int, assignment: list[int], used: set[int]):
        nonlocal count
        if count >= cap:
            return
        if qa == nq:
            count += 1
            return
        for ta in range(nt):
            if ta in used or not _atom_ok(query.atoms[qa], target.atoms[ta]):
                continue
            ok = True
            for nbr, bidx in query.neighbors[qa]:
                if nbr < qa:
                    t_bond = target.bond_between(assignment[nbr], ta)
                    if t_bond is None or t_bond.order is not query.bonds[bidx].order:
                        ok = False
                        break
            if ok:
                assignment.append(ta)
                used.add(ta)
                place(qa + 1, assignment, used)
                used.remove(ta)
                assignment.pop()

    place(0, [], set())
    return count


def embedding_exists(query: Molecule, target: Molecule) -> bool:
    return count_embeddings(query, target, cap=1) > 0


def popcount_via_bytes(bits: int, nbits: int) -> int:
    """Bit count through an explicit byte table, not int.bit_count."""
    table = [bin(i).count("1") for i in range(256)]
    return sum(table[b] for b in bits.to_bytes(nbits // 8 + 1, "little"))


def tanimoto_oracle(a_bits: int, b_bits: int, nbits: int) -> float:
    union = popcount_via_bytes(a_bits | b_bits, nbits)
    if union == 0:
        return 1.0
    return popcount_via_bytes(a_bits & b_bits, nbits) / union


def _connected(n: int, edges: list[tuple[int, int]]) -> bool:
    if n == 0:
        return False
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    queue = [0]
    while queue:
        for nbr in adj[queue.pop()]:
            if nbr not in seen:
                seen.add(nbr)
                queue.append(nbr)
    return len(seen) == n


def _fragment_valid(mol: Molecule, atoms: list[int], bonds: list[tuple[int, int, BondOrder]]) -> bool:
    """Same expressibility rule as the engine: the fragment must finalize."""
    idx = {a: i for i, a in enumerate(atoms)}
    builder = MolBuilder()
    for a in atoms:
        atom = mol.atoms[a]
        builder.add_atom(atom.symbol, atom.formal_charge, atom.aromatic)
    for a, b, order in bonds:
        builder.add_bond(idx[a], idx[b], order)
    try:
        builder.finalize()
        return True
    except AromaticityError:
        return False


def _injections(sub_atoms: list[int], m1: Molecule, m2: Molecule):
    """All injective compatible maps sub_atoms -> m2 atom indices."""
    n2 = len(m2.atoms)

    def place(pos: int, assignment: dict[int, int]):
        if pos == len(sub_atoms):
            yield dict(assignment)
            return
        a = sub_atoms[pos]
        for t in range(n2):
            if t in assignment.values():
                continue
            if not _atom_ok(m1.atoms[a], m2.atoms[t]):
                continue
            assignment[a] = t
            yield from place(pos + 1, assignment)
            del assignment[a]

    yield from place(0, {})


def mcs_oracle(mols: list[Molecule]) -> tuple[int, int]:
    """(atoms, bonds) of the best connected common fragment, by enumeration.

    Walks atom subsets of the first molecule from largest to smallest; for
    each, tries every joint choice of injections into the remaining
    molecules and keeps bonds preserved by all of them. Only practical for
    small molecules.
    """
    m1 = mols[0]
    n1 = len(m1.atoms)
    best = (0, 0)
    induced = {
        frozenset((b.a, b.b)): b.order for b in m1.bonds
    }

    for size in range(n1, 0, -1):
        if size < best[0]:
            break
        for combo in itertools.combinations(range(n1), size):
            atoms = list(combo)
            atom_set = set(atoms)
            base_bonds = [
                (a, b, order)
                for pair, order in induced.items()
                for a, b in [tuple(sorted(pair))]
                if a in atom_set and b in atom_set
            ]
            if not _connected(size, [(atoms.index(a), atoms.index(b)) for a, b, _ in base_bonds]):
                continue
            best_here = _best_joint_bonds(mols, atoms, base_bonds, best)
            if best_here is not None and best_here > best:
                best = best_here
    return best


def _best_joint_bonds(mols, atoms, base_bonds, floor):
    """Best (|atoms|, |bonds|) over joint injections, or None."""
    best = None

    def recurse(mol_idx: int, bonds: list):
        nonlocal best
        if mol_idx == len(mols):
            positions = {a: i for i, a in enumerate(atoms)}
            edges = [(positions[a], positions[b]) for a, b, _ in bonds]
            if not _connected(len(atoms), edges):
                return
            if not _fragment_valid(mols[0], atoms, bonds):
                return
            cand = (len(atoms), len(bonds))
            if best is None or cand > best:
                best = cand
            return
        for phi in _injections(atoms, mols[0], mols[mol_idx]):
            kept = []
            for a, b, order in bonds:
                t_bond = mols[mol_idx].bond_between(phi[a], phi[b])
                if t_bond is not None and t_bond.order is order:
                    kept.append((a, b, order))
            recurse(mol_idx + 1, kept)

    recurse(1, base_bonds)
    return best


def bayes_posteriors(
    docs: list[tuple[int, str]], alpha: float, query_bits: int, nbits: int
) -> dict[str, float]:
    """Direct Bayes rule with Laplace smoothing, plain float products."""
    classes = sorted({label for _, label in docs})
    total = len(docs)
    joint = {}
    for c in classes:
        class_docs = [bits for bits, label in docs if label == c]
        n_c = len(class_docs)
        prob = n_c / total
        for j in range(nbits):
            n_cj = sum(1 for bits in class_docs if bits >> j & 1)
            p = (n_cj + alpha) / (n_c + 2 * alpha)
            prob *= p if query_bits >> j & 1 else (1 - p)
        joint[c] = prob
    norm = sum(joint.values())
    return {c: v / norm for c, v in joint.items()}


def evaluate_clause(record: dict, path: str, op: str, value) -> bool:
    """Minimal independent filter semantics for randomized query tests."""
    node = record
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            node = None
            break
        node = node[part]
    if op == "isnull":
        want_null = value in (True, "true", "True", 1)
        return (node is None) is want_null
    if node is None:
        return False
    if isinstance(node, (int, float)) and isinstance(value, str):
        try:
            value = type(node)(float(value)) if "." in value else int(value)
        except ValueError:
            return False
    if op == "exact":
        return node == value
    if op == "in":
        items = value.split(",") if isinstance(value, str) else list(value)
        return any(evaluate_clause(record, path, "exact", item) for item in items)
    if op == "gt":
        return node > value
    if op == "gte":
        return node >= value
    if op == "lt":
        return node < value
    if op == "lte":
        return node <= value
    if op == "contains":
        return str(value) in str(node)
    if op == "icontains":
        return str(value).lower() in str(node).lower()
    if op == "startswith":
        return str(node).startswith(str(value))
    raise ValueError(op)
