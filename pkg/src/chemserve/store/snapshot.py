"""Versioned snapshot archive: records plus the prebuilt search index.

A JSON document with a magic format marker; fingerprints are stored as hex
so ``serve`` starts without rehashing the compound set.
"""

from __future__ import annotations

import json
from pathlib import Path

from chemserve.errors import FormatError
from chemserve.formats.smiles import parse_smiles
from chemserve.search import Fingerprint, SearchIndex, build_index
from chemserve.search.fingerprint import DEFAULT_NBITS, DEFAULT_RADIUS
from chemserve.store.store import PRIMARY_KEYS, RESOURCES, RecordStore

FORMAT_MARKER = "chemserve-snapshot"
VERSION = 1


def save_snapshot(store: RecordStore, index: SearchIndex, path: str | Path) -> None:
    doc = {
        "format": FORMAT_MARKER,
        "version": VERSION,
        "radius": index.radius,
        "nbits": index.nbits,
        "resources": {r: list(store.records(r)) for r in RESOURCES},
        "fingerprints": {
            e.compound_id: {"fp": e.fp.to_hex(), "screen": e.screen.to_hex()}
            for e in index.entries()
        },
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_snapshot(path: str | Path) -> tuple[RecordStore, SearchIndex]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise FormatError(f"cannot read snapshot: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_MARKER:
        raise FormatError(f"not a {FORMAT_MARKER} file")
    if doc.get("version") != VERSION:
        raise FormatError(
            f"unsupported snapshot version {doc.get('version')}; supported: {VERSION}"
        )

    store = RecordStore()
    resources = doc.get("resources", {})
    molecules = {}
    mol_records = {}
    for record in resources.get("molecule", []):
        key = record["molecule_chembl_id"]
        mol_records[key] = record
        molecules[key] = parse_smiles(record["molecule_structures"]["canonical_smiles"])
    store._publish("molecule", mol_records, molecules)
    for res in ("target", "activity", "mechanism"):
        key_field = PRIMARY_KEYS[res]
        store._publish(res, {r[key_field]: r for r in resources.get(res, [])}, None)

    radius = int(doc.get("radius", DEFAULT_RADIUS))
    nbits = int(doc.get("nbits", DEFAULT_NBITS))
    fps = doc.get("fingerprints", {})
    precomputed = {
        cid: (
            Fingerprint.from_hex(nbits, entry["fp"]),
            Fingerprint.from_hex(nbits, entry["screen"]),
        )
        for cid, entry in fps.items()
    }
    index = build_index(store.compounds(), radius, nbits, precomputed=precomputed)
    return store, index
