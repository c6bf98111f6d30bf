"""Exception hierarchy shared across the package.

Every domain failure raises a ChemserveError subclass so callers (CLI,
service handlers, fuzz harnesses) can distinguish structured errors from
genuine bugs.
"""


class ChemserveError(Exception):
    """Base class for all structured errors raised by chemserve."""


class SmilesSyntaxError(ChemserveError):
    """Malformed SMILES input."""

    def __init__(self, position: int, reason: str):
        self.position = position
        self.reason = reason
        super().__init__(f"SMILES syntax error at position {position}: {reason}")


class ValenceError(ChemserveError):
    """Explicit bond orders exceed the maximal supported valence of an atom."""


class UnsupportedElement(ChemserveError):
    """Element outside the embedded table, or one without a valence model."""


class AromaticityError(ChemserveError):
    """Aromatic atom or bond that does not lie on a ring."""


class FormatError(ChemserveError):
    """Malformed structured file (ctab, SDF, model file, snapshot)."""

    def __init__(self, reason: str, line: int | None = None, entry: int | None = None):
        self.reason = reason
        self.line = line
        self.entry = entry
        where = ""
        if entry is not None:
            where += f" (entry {entry})"
        if line is not None:
            where += f" (line {line})"
        super().__init__(f"{reason}{where}")


class CapacityError(ChemserveError):
    """Molecule too large for a fixed-width output format."""


class InvalidParameter(ChemserveError):
    """Argument outside its documented domain."""


class DuplicateId(ChemserveError):
    """Duplicate key where uniqueness is required."""


class IngestError(ChemserveError):
    """A record that could not be ingested; carries its source location."""

    def __init__(self, reason: str, line: int | None = None, entry: int | None = None):
        self.reason = reason
        self.line = line
        self.entry = entry
        where = ""
        if entry is not None:
            where += f" (entry {entry})"
        if line is not None:
            where += f" (line {line})"
        super().__init__(f"{reason}{where}")


class QueryError(ChemserveError):
    """Base for query translation/execution failures."""


class UnknownField(QueryError):
    def __init__(self, field_path: str):
        self.field_path = field_path
        super().__init__(f"unknown field: {field_path}")


class UnknownOperator(QueryError):
    def __init__(self, operator: str):
        self.operator = operator
        super().__init__(f"unknown operator: {operator}")


class TypeMismatch(QueryError):
    def __init__(self, field_path: str, detail: str):
        self.field_path = field_path
        super().__init__(f"type mismatch on {field_path}: {detail}")


class EmptyTrainingSet(ChemserveError):
    """No (compound, target) pairs survive training-set selection."""


class TransportError(ChemserveError):
    """Network-level failure in the client."""


class ServiceError(ChemserveError):
    """HTTP 4xx/5xx returned by the service."""

    def __init__(self, status: int, body: str):
        self.status = status
        self.body = body
        super().__init__(f"service returned {status}: {body[:200]}")
