"""Lazy, chainable queries over the REST service.

A LazyQuery is an immutable description: building one, chaining filters,
or reordering performs no I/O. Page requests happen on demand during
iteration, ``len()`` issues a single limit=1 request and reads
total_count, and indexing fetches only the page containing the item.
Responses are cached on disk by full URL (default ttl 24h), so repeated
iterations inside the ttl hit the network zero times.

    client = resource("http://localhost:8000", "mechanism")
    rows = client.filter(target_chembl_id="CHEMBL1824")
    ids = [r["molecule_chembl_id"] for r in rows]
"""

from __future__ import annotations

import json
import os
import urllib.parse
from dataclasses import dataclass, field, replace

import httpx

from chemserve.client.cache import DEFAULT_TTL, ResponseCache
from chemserve.errors import ServiceError, TransportError
from chemserve.store.query import OPERATORS, FilterClause

DEFAULT_PAGE_SIZE = 20


class Transport:
    """Thin wrapper over an httpx client; swap in tests to count requests."""

    def __init__(self, http: httpx.Client | None = None):
        self._http = http or httpx.Client(timeout=30.0)

    def get(self, url: str) -> bytes:
        try:
            response = self._http.get(url)
        except httpx.HTTPError as exc:
            raise TransportError(f"GET {url} failed: {exc}") from exc
        if response.status_code >= 400:
            raise ServiceError(response.status_code, response.text)
        return response.content


@dataclass(frozen=True)
class ClientContext:
    base_url: str
    transport: Transport
    cache: ResponseCache


@dataclass(frozen=True)
class LazyQuery:
    context: ClientContext
    resource_name: str
    filters: tuple[FilterClause, ...] = ()
    order: tuple[str, ...] = ()
    page_size: int = DEFAULT_PAGE_SIZE
    cache_enabled: bool = True
    ttl: float = DEFAULT_TTL

    # -- refinement (no I/O) ------------------------------------------------

    def filter(self, *args, **kwargs) -> "LazyQuery":
        """Append clauses: positional (field, op, value) or Django-style
        keywords (``max_phase=4``, ``molecule_chembl_id__in=[...]``)."""
        clauses = list(self.filters)
        if args:
            if len(args) != 3:
                raise TypeError("positional filter needs (field, op, value)")
            clauses.append(FilterClause(args[0], args[1], args[2]))
        for key, value in kwargs.items():
            name, sep, op = key.rpartition("__")
            if sep and op in OPERATORS:
                clauses.append(FilterClause(name, op, value))
            else:
                clauses.append(FilterClause(key, "exact", value))
        return replace(self, filters=tuple(clauses))

    def order_by(self, *keys: str) -> "LazyQuery":
        return replace(self, order=self.order + keys)

    def cache_control(self, enabled: bool, ttl: float | None = None) -> "LazyQuery":
        return replace(self, cache_enabled=enabled, ttl=self.ttl if ttl is None else ttl)

    def page_sized(self, page_size: int) -> "LazyQuery":
        return replace(self, page_size=page_size)

    # -- materialization -----------------------------------------------------

    def _url(self, limit: int, offset: int) -> str:
        params: list[tuple[str, str]] = []
        for clause in self.filters:
            key = clause.field_path if clause.operator == "exact" else f"{clause.field_path}__{clause.operator}"
            value = clause.value
            if isinstance(value, (list, tuple, set)):
                value = ",".join(str(v) for v in value)
            params.append((key, str(value)))
        if self.order:
            params.append(("order_by", ",".join(self.order)))
        params.append(("limit", str(limit)))
        params.append(("offset", str(offset)))
        return (
            f"{self.context.base_url}/api/data/{self.resource_name}"
            f"?{urllib.parse.urlencode(params)}"
        )

    def _fetch(self, url: str) -> dict:
        body: bytes | None = None
        if self.cache_enabled:
            body = self.context.cache.get(url, self.ttl)
        if body is None:
            body = self.context.transport.get(url)
            if self.cache_enabled:
                self.context.cache.put(url, body)
        return json.loads(body)

    def _records_key(self, page: dict) -> list[dict]:
        for key, value in page.items():
            if key != "page_meta" and isinstance(value, list):
                return value
        return []

    def __iter__(self):
        url: str | None = self._url(self.page_size, 0)
        while url is not None:
            page = self._fetch(url)
            yield from self._records_key(page)
            nxt = page["page_meta"].get("next")
            url = urllib.parse.urljoin(self.context.base_url, nxt) if nxt else None

    def __len__(self) -> int:
        page = self._fetch(self._url(1, 0))
        return int(page["page_meta"]["total_count"])

    def count(self) -> int:
        return len(self)

    def __getitem__(self, index: int):
        if isinstance(index, slice):
            raise TypeError("slicing is not supported; iterate instead")
        if index < 0:
            raise IndexError("negative indexing would need a count request; use count()")
        page_start = (index // self.page_size) * self.page_size
        page = self._fetch(self._url(self.page_size, page_start))
        records = self._records_key(page)
        position = index - page_start
        if position >= len(records):
            raise IndexError(index)
        return records[position]

    def all(self) -> list[dict]:
        return list(self)


def resource(
    base_url: str,
    name: str,
    transport: Transport | None = None,
    cache_directory: str | os.PathLike | None = None,
) -> LazyQuery:
    """Entry point: a lazy query over one resource; performs no I/O."""
    context = ClientContext(
        base_url=base_url.rstrip("/"),
        transport=transport or Transport(),
        cache=ResponseCache(cache_directory),
    )
    return LazyQuery(context, name)
