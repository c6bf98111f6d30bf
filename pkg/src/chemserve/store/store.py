"""In-memory record store for the four data resources.

Records are plain dicts (what the wire formats serialize). Ingestion
builds a fresh snapshot and publishes it atomically, so concurrent readers
see either the old or the new state, never a partial one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from chemserve.errors import ChemserveError, IngestError, InvalidParameter, UnknownField
from chemserve.formats import parse_sdf, write_ctab, write_smiles
from chemserve.formats.smiles import parse_smiles
from chemserve.molgraph import Molecule, compute_descriptors
from chemserve.store.query import Query, ResultPage, execute

RESOURCES = ("molecule", "target", "activity", "mechanism")

PRIMARY_KEYS = {
    "molecule": "molecule_chembl_id",
    "target": "target_chembl_id",
    "activity": "activity_id",
    "mechanism": "mec_id",
}

# dotted paths legal in filters and order_by, per resource
KNOWN_FIELDS: dict[str, frozenset[str]] = {
    "molecule": frozenset(
        {
            "molecule_chembl_id",
            "pref_name",
            "max_phase",
            "molecule_structures",
            "molecule_structures.canonical_smiles",
            "molecule_structures.molfile",
            "molecule_properties",
            "molecule_properties.molecular_weight",
            "molecule_properties.heavy_atom_count",
            "molecule_properties.ring_count",
            "molecule_properties.rotatable_bonds",
            "molecule_properties.hbd",
            "molecule_properties.hba",
        }
    ),
    "target": frozenset({"target_chembl_id", "pref_name", "organism"}),
    "activity": frozenset(
        {
            "activity_id",
            "molecule_chembl_id",
            "target_chembl_id",
            "standard_type",
            "standard_value",
            "standard_units",
        }
    ),
    "mechanism": frozenset(
        {"mec_id", "molecule_chembl_id", "target_chembl_id", "mechanism_of_action", "action_type"}
    ),
}

# TSV ingestion schemas: field -> (required, coercion)
_TSV_SCHEMAS: dict[str, dict[str, tuple[bool, type]]] = {
    "target": {
        "target_chembl_id": (True, str),
        "pref_name": (True, str),
        "organism": (False, str),
    },
    "activity": {
        "activity_id": (True, int),
        "molecule_chembl_id": (True, str),
        "target_chembl_id": (True, str),
        "standard_type": (True, str),
        "standard_value": (False, float),
        "standard_units": (False, str),
    },
    "mechanism": {
        "mec_id": (True, int),
        "molecule_chembl_id": (True, str),
        "target_chembl_id": (True, str),
        "mechanism_of_action": (True, str),
        "action_type": (False, str),
    },
}


@dataclass
class IngestReport:
    ingested: int = 0
    replaced: int = 0
    dangling: int = 0
    errors: list[IngestError] = field(default_factory=list)


@dataclass(frozen=True)
class _Snapshot:
    records: dict[str, tuple[dict, ...]]
    by_key: dict[str, dict[object, dict]]
    molecules: dict[str, Molecule]  # parsed structure per compound id

    @classmethod
    def empty(cls) -> "_Snapshot":
        return cls({r: () for r in RESOURCES}, {r: {} for r in RESOURCES}, {})


class RecordStore:
    """Thread-safe for many readers; ingestion swaps snapshots atomically."""

    def __init__(self):
        self._snap = _Snapshot.empty()

    # -- ingestion ---------------------------------------------------------

    def ingest_sdf(self, sdf_text: str) -> IngestReport:
        """Load compound records from an SD file.

        Each entry needs a ``chembl_id`` property; ``max_phase`` defaults
        to 0 and ``pref_name`` is optional. Structures are canonicalized
        and descriptors computed at ingest. Bad entries are collected in
        the report while the rest proceed; duplicate ids keep the newest.
        """
        report = IngestReport()
        snap = self._snap
        by_key = dict(snap.by_key["molecule"])
        molecules = dict(snap.molecules)

        try:
            entries = parse_sdf(sdf_text)
        except ChemserveError as exc:
            report.errors.append(IngestError(str(exc)))
            return report

        for idx, entry in enumerate(entries):
            props = entry.properties
            chembl_id = props.get("chembl_id", "").strip()
            if not chembl_id:
                report.errors.append(IngestError("missing chembl_id property", entry=idx))
                continue
            try:
                max_phase = int(props.get("max_phase", "0") or 0)
            except ValueError:
                report.errors.append(IngestError("max_phase is not an integer", entry=idx))
                continue
            try:
                mol = entry.molecule
                record = {
                    "molecule_chembl_id": chembl_id,
                    "pref_name": props.get("pref_name"),
                    "max_phase": max_phase,
                    "molecule_structures": {
                        "canonical_smiles": write_smiles(mol),
                        "molfile": write_ctab(mol),
                    },
                    "molecule_properties": compute_descriptors(mol).as_dict(),
                }
            except ChemserveError as exc:
                report.errors.append(IngestError(str(exc), entry=idx))
                continue
            if chembl_id in by_key:
                report.replaced += 1
            by_key[chembl_id] = record
            molecules[chembl_id] = mol
            report.ingested += 1

        self._publish("molecule", by_key, molecules)
        return report

    def ingest_tsv(self, resource: str, tsv_text: str) -> IngestReport:
        """Load target/activity/mechanism records from tab-separated text."""
        if resource not in _TSV_SCHEMAS:
            raise InvalidParameter(f"TSV ingestion supports {sorted(_TSV_SCHEMAS)}, not {resource!r}")
        schema = _TSV_SCHEMAS[resource]
        key_field = PRIMARY_KEYS[resource]
        report = IngestReport()
        snap = self._snap
        by_key = dict(snap.by_key[resource])

        lines = tsv_text.replace("\r\n", "\n").split("\n")
        while lines and not lines[-1].strip():
            lines.pop()
        if not lines:
            self._publish(resource, by_key, None)
            return report
        header = [h.strip() for h in lines[0].split("\t")]
        unknown = [h for h in header if h not in schema]
        if unknown:
            raise IngestError(f"unknown columns: {', '.join(unknown)}", line=1)

        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            cells = line.split("\t")
            record: dict = {}
            problem = None
            for col, cell in zip(header, cells):
                cell = cell.strip()
                required, ctype = schema[col]
                if not cell:
                    continue  # empty cell -> absent optional field
                try:
                    record[col] = ctype(cell)
                except ValueError:
                    problem = IngestError(
                        f"cannot parse {col}={cell!r} as {ctype.__name__}", line=lineno
                    )
                    break
            if problem is None:
                missing = [c for c, (req, _) in schema.items() if req and c not in record]
                if missing:
                    problem = IngestError(f"missing required fields: {', '.join(missing)}", line=lineno)
            if problem is not None:
                report.errors.append(problem)
                continue
            if resource in ("activity", "mechanism"):
                if record["molecule_chembl_id"] not in self._snap.by_key["molecule"]:
                    report.dangling += 1
                elif record["target_chembl_id"] not in self._snap.by_key["target"]:
                    report.dangling += 1
            key = record[key_field]
            if key in by_key:
                report.replaced += 1
            by_key[key] = record
            report.ingested += 1

        self._publish(resource, by_key, None)
        return report

    def _publish(self, resource: str, by_key: dict, molecules: dict | None) -> None:
        snap = self._snap
        records = {**snap.records, resource: tuple(by_key.values())}
        keys = {**snap.by_key, resource: by_key}
        self._snap = _Snapshot(records, keys, molecules if molecules is not None else snap.molecules)

    # -- queries -----------------------------------------------------------

    def execute_query(self, query: Query) -> ResultPage:
        if query.resource not in RESOURCES:
            raise UnknownField(query.resource)
        snap = self._snap
        return execute(
            list(snap.records[query.resource]),
            query,
            KNOWN_FIELDS[query.resource],
            PRIMARY_KEYS[query.resource],
        )

    def get_by_id(self, resource: str, key) -> dict | None:
        if resource not in RESOURCES:
            raise UnknownField(resource)
        return self._snap.by_key[resource].get(key)

    def count(self, resource: str) -> int:
        return len(self._snap.records[resource])

    def records(self, resource: str) -> tuple[dict, ...]:
        if resource not in RESOURCES:
            raise UnknownField(resource)
        return self._snap.records[resource]

    def compounds(self) -> list[tuple[str, Molecule]]:
        """(id, parsed molecule) pairs for index building and prediction."""
        snap = self._snap
        return sorted(snap.molecules.items())

    def molecule_for(self, compound_id: str) -> Molecule | None:
        mol = self._snap.molecules.get(compound_id)
        if mol is None:
            record = self.get_by_id("molecule", compound_id)
            if record is not None:
                mol = parse_smiles(record["molecule_structures"]["canonical_smiles"])
        return mol
