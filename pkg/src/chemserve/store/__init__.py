"""Record store: ingestion plus filter/order/paginate query execution."""

from chemserve.store.query import (
    DEFAULT_LIMIT,
    MAX_LIMIT,
    OPERATORS,
    FilterClause,
    Query,
    ResultPage,
)
from chemserve.store.store import (
    KNOWN_FIELDS,
    PRIMARY_KEYS,
    RESOURCES,
    IngestReport,
    RecordStore,
)

__all__ = [
    "DEFAULT_LIMIT",
    "FilterClause",
    "IngestReport",
    "KNOWN_FIELDS",
    "MAX_LIMIT",
    "OPERATORS",
    "PRIMARY_KEYS",
    "Query",
    "RESOURCES",
    "RecordStore",
    "ResultPage",
]
