"""Immutable search index over a compound collection."""

from __future__ import annotations

from dataclasses import dataclass

from chemserve.errors import DuplicateId, InvalidParameter
from chemserve.molgraph import Molecule
from chemserve.search.fingerprint import (
    DEFAULT_NBITS,
    DEFAULT_RADIUS,
    Fingerprint,
    fingerprint,
    screen_fingerprint,
    tanimoto,
)
from chemserve.search.substructure import match_substructure


@dataclass(frozen=True)
class IndexEntry:
    compound_id: str
    molecule: Molecule
    fp: Fingerprint
    screen: Fingerprint


class SearchIndex:
    """Per-compound fingerprints and molecules; immutable once built."""

    def __init__(self, entries: dict[str, IndexEntry], radius: int, nbits: int):
        self._entries = entries
        self.radius = radius
        self.nbits = nbits

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, compound_id: str) -> bool:
        return compound_id in self._entries

    def entries(self) -> list[IndexEntry]:
        return list(self._entries.values())

    def get(self, compound_id: str) -> IndexEntry | None:
        return self._entries.get(compound_id)


def build_index(
    compounds: list[tuple[str, Molecule]],
    radius: int = DEFAULT_RADIUS,
    nbits: int = DEFAULT_NBITS,
    precomputed: dict[str, tuple[Fingerprint, Fingerprint]] | None = None,
) -> SearchIndex:
    """Index (id, molecule) pairs; ids must be unique.

    `precomputed` may supply (fp, screen) pairs (e.g. from a snapshot file)
    to skip rehashing.
    """
    entries: dict[str, IndexEntry] = {}
    for compound_id, mol in compounds:
        if compound_id in entries:
            raise DuplicateId(f"duplicate compound id {compound_id!r}")
        if precomputed is not None and compound_id in precomputed:
            fp, screen = precomputed[compound_id]
        else:
            fp = fingerprint(mol, radius, nbits)
            screen = screen_fingerprint(mol, nbits=nbits)
        entries[compound_id] = IndexEntry(compound_id, mol, fp, screen)
    return SearchIndex(entries, radius, nbits)


def similarity_search(
    index: SearchIndex, query: Molecule, threshold: float
) -> list[tuple[str, float]]:
    """All entries with tanimoto >= threshold, sorted by score desc, id asc."""
    if not 0 < threshold <= 1:
        raise InvalidParameter(f"threshold must be in (0, 1], got {threshold}")
    query_fp = fingerprint(query, index.radius, index.nbits)
    hits = [
        (entry.compound_id, tanimoto(query_fp, entry.fp))
        for entry in index.entries()
    ]
    hits = [(cid, score) for cid, score in hits if score >= threshold]
    hits.sort(key=lambda pair: (-pair[1], pair[0]))
    return hits


def substructure_search(index: SearchIndex, query: Molecule) -> list[str]:
    """Ids of entries containing the query; screen then verify.

    The path-bit screen never drops a true match, so the result equals a
    full verification pass over every entry.
    """
    if len(query.atoms) == 0:
        raise InvalidParameter("substructure query must contain at least one atom")
    query_screen = screen_fingerprint(query, nbits=index.nbits)
    hits = []
    for entry in index.entries():
        if len(query.atoms) > len(entry.molecule.atoms):
            continue
        if not entry.screen.contains(query_screen):
            continue
        if match_substructure(query, entry.molecule, max_matches=1):
            hits.append(entry.compound_id)
    return sorted(hits)
