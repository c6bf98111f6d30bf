"""Query model and execution: conjunctive filters, ordering, pagination.

One semantics shared by the store, the service, and the client. Records
are plain dicts; dotted field paths traverse nested dicts. Filter values
arriving as text (query strings, CLI flags) are coerced toward the record
value's type at comparison time, the single coercion point for the stack.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from chemserve.errors import TypeMismatch, UnknownField, UnknownOperator

OPERATORS = frozenset(
    {"exact", "in", "gt", "gte", "lt", "lte", "contains", "icontains", "startswith", "isnull"}
)

DEFAULT_LIMIT = 20
MAX_LIMIT = 1000

_ABSENT = object()


@dataclass(frozen=True)
class FilterClause:
    field_path: str
    operator: str
    value: object


@dataclass(frozen=True)
class Query:
    resource: str
    filters: tuple[FilterClause, ...] = ()
    order_by: tuple[str, ...] = ()  # leading "-" marks descending
    limit: int = DEFAULT_LIMIT
    offset: int = 0


@dataclass
class ResultPage:
    records: list[dict]
    total_count: int
    limit: int
    offset: int

    @property
    def next_offset(self) -> int | None:
        nxt = self.offset + self.limit
        return nxt if nxt < self.total_count else None

    @property
    def previous_offset(self) -> int | None:
        return max(0, self.offset - self.limit) if self.offset > 0 else None


def get_path(record: dict, path: str):
    """Value at a dotted path, or the absent sentinel."""
    node = record
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            return _ABSENT
        node = node[part]
    return _ABSENT if node is None else node


def is_absent(value) -> bool:
    return value is _ABSENT


def _coerce(record_value, clause_value, path: str, ordered: bool):
    """Align a clause value with the record value's type.

    Text clause values against numeric fields are parsed as numbers; for
    ordered comparisons a failed parse is an error, for equality it simply
    cannot match (None returned).
    """
    if isinstance(record_value, bool) or isinstance(clause_value, bool):
        return clause_value
    if isinstance(record_value, (int, float)) and isinstance(clause_value, str):
        try:
            return float(clause_value) if "." in clause_value or "e" in clause_value.lower() else int(clause_value)
        except ValueError:
            if ordered:
                raise TypeMismatch(path, f"{clause_value!r} is not numeric") from None
            return None
    if isinstance(record_value, str) and isinstance(clause_value, (int, float)):
        return str(clause_value)
    return clause_value


def _compare(record_value, clause_value, op: str, path: str) -> bool:
    coerced = _coerce(record_value, clause_value, path, op in {"gt", "gte", "lt", "lte"})
    if coerced is None:
        return False
    try:
        if op == "exact":
            return record_value == coerced
        if op == "gt":
            return record_value > coerced
        if op == "gte":
            return record_value >= coerced
        if op == "lt":
            return record_value < coerced
        if op == "lte":
            return record_value <= coerced
        if op == "contains":
            return str(coerced) in str(record_value)
        if op == "icontains":
            return str(coerced).casefold() in str(record_value).casefold()
        if op == "startswith":
            return str(record_value).startswith(str(coerced))
    except TypeError as exc:
        raise TypeMismatch(path, str(exc)) from None
    raise UnknownOperator(op)


def _truthy(value) -> bool:
    if isinstance(value, str):
        return value.strip().casefold() in {"1", "true", "yes"}
    return bool(value)


def matches(record: dict, clause: FilterClause) -> bool:
    """Evaluate one clause; comparisons on absent fields are false."""
    if clause.operator not in OPERATORS:
        raise UnknownOperator(clause.operator)
    value = get_path(record, clause.field_path)
    if clause.operator == "isnull":
        return is_absent(value) is _truthy(clause.value)
    if is_absent(value):
        return False
    if clause.operator == "in":
        options = clause.value
        if isinstance(options, str):
            options = options.split(",")
        if not isinstance(options, (list, tuple, set)):
            raise TypeMismatch(clause.field_path, "'in' needs a list of values")
        return any(_compare(value, option, "exact", clause.field_path) for option in options)
    return _compare(value, clause.value, clause.operator, clause.field_path)


def _sort_records(records: list[dict], order_by: tuple[str, ...], default_key: str) -> list[dict]:
    keys = list(order_by) if order_by else [default_key]
    out = records
    for key in reversed(keys):
        descending = key.startswith("-")
        path = key.lstrip("+-")
        present = [r for r in out if not is_absent(get_path(r, path))]
        absent = [r for r in out if is_absent(get_path(r, path))]
        try:
            present.sort(key=lambda r: get_path(r, path), reverse=descending)
        except TypeError as exc:
            raise TypeMismatch(path, str(exc)) from None
        out = present + absent  # absent values sort last either way
    return out


def execute(
    records: list[dict],
    query: Query,
    known_fields: frozenset[str],
    primary_key: str,
) -> ResultPage:
    """Filter, stable-sort, and window records for one resource."""
    for clause in query.filters:
        if clause.field_path not in known_fields:
            raise UnknownField(clause.field_path)
        if clause.operator not in OPERATORS:
            raise UnknownOperator(clause.operator)
    for key in query.order_by:
        if key.lstrip("+-") not in known_fields:
            raise UnknownField(key.lstrip("+-"))

    selected = [r for r in records if all(matches(r, c) for c in query.filters)]
    selected = _sort_records(selected, query.order_by, primary_key)
    window = selected[query.offset : query.offset + query.limit]
    return ResultPage(
        records=window,
        total_count=len(selected),
        limit=query.limit,
        offset=query.offset,
    )
