"""Training-set assembly from the record store."""

from __future__ import annotations

from chemserve.errors import EmptyTrainingSet
from chemserve.search.fingerprint import DEFAULT_NBITS, DEFAULT_RADIUS, Fingerprint, fingerprint
from chemserve.store import RecordStore


def build_training_set(
    store: RecordStore,
    min_pairs_per_target: int = 1,
    radius: int = DEFAULT_RADIUS,
    nbits: int = DEFAULT_NBITS,
) -> list[tuple[Fingerprint, str]]:
    """One example per distinct (compound, target) activity pair.

    Targets with fewer than `min_pairs_per_target` surviving pairs are
    dropped; activity rows whose compound has no parseable structure in
    the store contribute nothing.
    """
    pairs: set[tuple[str, str]] = set()
    for record in store.records("activity"):
        mol_id = record.get("molecule_chembl_id")
        target_id = record.get("target_chembl_id")
        if mol_id and target_id:
            pairs.add((mol_id, target_id))

    per_target: dict[str, list[str]] = {}
    for mol_id, target_id in sorted(pairs):
        if store.molecule_for(mol_id) is None:
            continue
        per_target.setdefault(target_id, []).append(mol_id)

    fp_cache: dict[str, Fingerprint] = {}
    examples: list[tuple[Fingerprint, str]] = []
    for target_id in sorted(per_target):
        mol_ids = per_target[target_id]
        if len(mol_ids) < min_pairs_per_target:
            continue
        for mol_id in mol_ids:
            if mol_id not in fp_cache:
                fp_cache[mol_id] = fingerprint(store.molecule_for(mol_id), radius, nbits)
            examples.append((fp_cache[mol_id], target_id))
    if not examples:
        raise EmptyTrainingSet(
            f"no targets retain at least {min_pairs_per_target} compound pairs"
        )
    return examples
