"""REST service: data resources plus chemistry utility endpoints.

Routes
    GET  /api/data/similarity/{smiles}/{threshold}   threshold is percent 1-100
    GET  /api/data/substructure/{smiles}
    GET  /api/data/{resource}                        filters, order_by, limit, offset
    GET  /api/data/{resource}/{record_id}
    POST /api/utils/{op}                             smiles2ctab ctab2smiles descriptors
                                                     mcs canonicalizeSmiles

List responses wrap records in an envelope with page_meta; ``format`` (or
the Accept header, query parameter winning) selects json, jsonp, xml or
yaml. Every response carries ``Access-Control-Allow-Origin: *`` and
OPTIONS preflights answer 204. Handlers are stateless over the current
store snapshot, so any request order yields the same bodies.
"""

from __future__ import annotations

import json
import urllib.parse

from fastapi import FastAPI, Request, Response

from chemserve.errors import (
    CapacityError,
    ChemserveError,
    InvalidParameter,
    QueryError,
)
from chemserve.formats import parse_sdf, parse_smiles, write_sdf, write_smiles
from chemserve.formats.sdf import SdfEntry
from chemserve.molgraph import compute_descriptors
from chemserve.search import (
    SearchIndex,
    build_index,
    max_common_substructure,
    similarity_search,
    substructure_search,
)
from chemserve.service import serializers
from chemserve.service.schemas import DescriptorModel, ErrorBody, PageMeta
from chemserve.store import (
    DEFAULT_LIMIT,
    MAX_LIMIT,
    OPERATORS,
    FilterClause,
    Query,
    RESOURCES,
    RecordStore,
)

SDF_MEDIA = "chemical/x-mdl-sdfile"
UTIL_OPS = ("smiles2ctab", "ctab2smiles", "descriptors", "mcs", "canonicalizeSmiles")

_RESERVED_PARAMS = {"order_by", "limit", "offset", "format", "callback"}

_ACCEPT_FORMATS = {
    "application/json": "json",
    "application/javascript": "jsonp",
    "application/xml": "xml",
    "text/xml": "xml",
    "application/yaml": "yaml",
    "application/x-yaml": "yaml",
    "text/yaml": "yaml",
}


class ApiError(ChemserveError):
    """Carries an HTTP status for the error handler."""

    def __init__(self, status: int, reason: str, errors: list[dict] | None = None):
        self.status = status
        self.reason = reason
        self.errors = errors
        super().__init__(reason)


def _pick_format(request: Request) -> tuple[str, str | None]:
    fmt = request.query_params.get("format")
    callback = request.query_params.get("callback")
    if fmt is None:
        accept = request.headers.get("accept", "")
        for part in accept.split(","):
            media = part.split(";")[0].strip().lower()
            if media in _ACCEPT_FORMATS:
                fmt = _ACCEPT_FORMATS[media]
                break
        fmt = fmt or "json"
    if fmt not in serializers.FORMATS:
        raise ApiError(400, f"unknown format {fmt!r}")
    if fmt == "jsonp" and not callback:
        raise ApiError(400, "format=jsonp requires a callback parameter")
    return fmt, callback


def _int_param(request: Request, name: str, default: int) -> int:
    raw = request.query_params.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ApiError(400, f"{name} must be an integer, got {raw!r}") from None


def _translate_query(request: Request, resource: str) -> Query:
    filters = []
    for key, value in request.query_params.multi_items():
        if key in _RESERVED_PARAMS:
            continue
        field, sep, op = key.rpartition("__")
        if sep and op in OPERATORS:
            filters.append(FilterClause(field, op, value))
        else:
            filters.append(FilterClause(key, "exact", value))
    order_raw = request.query_params.get("order_by", "")
    order_by = tuple(k.strip() for k in order_raw.split(",") if k.strip())
    limit = _int_param(request, "limit", DEFAULT_LIMIT)
    offset = _int_param(request, "offset", 0)
    if not 1 <= limit <= MAX_LIMIT:
        raise ApiError(400, f"limit must be between 1 and {MAX_LIMIT}, got {limit}")
    if offset < 0:
        raise ApiError(400, f"offset must be >= 0, got {offset}")
    return Query(resource, tuple(filters), order_by, limit, offset)


def _page_url(request: Request, offset: int, limit: int) -> str:
    params = [
        (k, v)
        for k, v in request.query_params.multi_items()
        if k not in ("limit", "offset")
    ]
    params.append(("limit", str(limit)))
    params.append(("offset", str(offset)))
    return request.url.path + "?" + urllib.parse.urlencode(params)


def _envelope(request: Request, resource: str, records: list[dict], total: int, limit: int, offset: int) -> dict:
    nxt = offset + limit
    meta = PageMeta(
        limit=limit,
        offset=offset,
        total_count=total,
        next=_page_url(request, nxt, limit) if nxt < total else None,
        previous=_page_url(request, max(0, offset - limit), limit) if offset > 0 else None,
    )
    return {"page_meta": meta.model_dump(), serializers.plural(resource): records}


def _respond(request: Request, data: dict, status: int = 200) -> Response:
    fmt, callback = _pick_format(request)
    try:
        body, media = serializers.render(data, fmt, callback)
    except InvalidParameter as exc:
        raise ApiError(400, str(exc)) from None
    return Response(content=body, status_code=status, media_type=media)


def _parse_query_smiles(smiles: str):
    # the ASGI server already percent-decoded the path exactly once; "+"
    # stays "+" since path segments are not form-encoded
    try:
        mol = parse_smiles(smiles)
    except ChemserveError as exc:
        raise ApiError(400, f"bad SMILES: {exc}") from None
    if len(mol.atoms) == 0:
        raise ApiError(400, "query SMILES is empty")
    return mol


def _body_lines(text: str) -> list[tuple[int, str]]:
    return [(i + 1, line.strip()) for i, line in enumerate(text.splitlines()) if line.strip()]


def create_app(store: RecordStore, index: SearchIndex | None = None) -> FastAPI:
    """Build the service over a store snapshot and a compound index."""
    app = FastAPI(title="chemserve", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.store = store
    app.state.index = index if index is not None else build_index(store.compounds())

    @app.middleware("http")
    async def cors(request: Request, call_next):
        if request.method == "OPTIONS":
            response = Response(status_code=204)
        else:
            response = await call_next(request)
        response.headers["Access-Control-Allow-Origin"] = "*"
        response.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS"
        response.headers["Access-Control-Allow-Headers"] = "*"
        return response

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        body = ErrorBody(reason=exc.reason, status=exc.status, errors=exc.errors)
        return Response(
            content=body.model_dump_json(exclude_none=True),
            status_code=exc.status,
            media_type="application/json",
        )

    @app.exception_handler(ChemserveError)
    async def domain_error_handler(request: Request, exc: ChemserveError):
        body = ErrorBody(reason=str(exc), status=400)
        return Response(
            content=body.model_dump_json(exclude_none=True),
            status_code=400,
            media_type="application/json",
        )

    @app.exception_handler(Exception)
    async def unexpected_error_handler(request: Request, exc: Exception):
        body = ErrorBody(reason="internal error", status=500)
        return Response(
            content=body.model_dump_json(exclude_none=True),
            status_code=500,
            media_type="application/json",
        )

    @app.get("/api/data/similarity/{smiles}/{threshold}")
    async def similarity(request: Request, smiles: str, threshold: str):
        try:
            percent = int(threshold)
        except ValueError:
            raise ApiError(400, f"threshold must be an integer, got {threshold!r}") from None
        if not 1 <= percent <= 100:
            raise ApiError(400, f"threshold must be between 1 and 100, got {percent}")
        mol = _parse_query_smiles(smiles)
        hits = similarity_search(app.state.index, mol, percent / 100)
        limit = _int_param(request, "limit", DEFAULT_LIMIT)
        offset = _int_param(request, "offset", 0)
        if not 1 <= limit <= MAX_LIMIT or offset < 0:
            raise ApiError(400, "bad pagination window")
        records = []
        for cid, score in hits[offset : offset + limit]:
            record = dict(app.state.store.get_by_id("molecule", cid) or {"molecule_chembl_id": cid})
            record["similarity"] = round(score * 100, 2)
            records.append(record)
        return _respond(request, _envelope(request, "molecule", records, len(hits), limit, offset))

    @app.get("/api/data/substructure/{smiles}")
    async def substructure(request: Request, smiles: str):
        mol = _parse_query_smiles(smiles)
        ids = substructure_search(app.state.index, mol)
        limit = _int_param(request, "limit", DEFAULT_LIMIT)
        offset = _int_param(request, "offset", 0)
        if not 1 <= limit <= MAX_LIMIT or offset < 0:
            raise ApiError(400, "bad pagination window")
        records = [
            dict(app.state.store.get_by_id("molecule", cid) or {"molecule_chembl_id": cid})
            for cid in ids[offset : offset + limit]
        ]
        return _respond(request, _envelope(request, "molecule", records, len(ids), limit, offset))

    @app.get("/api/data/{resource}")
    async def list_resource(request: Request, resource: str):
        if resource not in RESOURCES:
            raise ApiError(404, f"unknown resource {resource!r}")
        try:
            query = _translate_query(request, resource)
            page = app.state.store.execute_query(query)
        except QueryError as exc:
            raise ApiError(400, str(exc)) from None
        return _respond(
            request,
            _envelope(request, resource, list(page.records), page.total_count, page.limit, page.offset),
        )

    @app.get("/api/data/{resource}/{record_id}")
    async def detail(request: Request, resource: str, record_id: str):
        if resource not in RESOURCES:
            raise ApiError(404, f"unknown resource {resource!r}")
        key: object = record_id
        if resource in ("activity", "mechanism"):
            try:
                key = int(record_id)
            except ValueError:
                raise ApiError(404, f"no {resource} with id {record_id!r}") from None
        record = app.state.store.get_by_id(resource, key)
        if record is None:
            raise ApiError(404, f"no {resource} with id {record_id!r}")
        return _respond(request, record)

    @app.post("/api/utils/{op}")
    async def utils(request: Request, op: str):
        if op not in UTIL_OPS:
            raise ApiError(404, f"unknown utility {op!r}; supported: {', '.join(UTIL_OPS)}")
        raw = await request.body()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ApiError(400, "body must be UTF-8 text") from None
        return _run_util(op, text)

    def _run_util(op: str, text: str) -> Response:
        if op in ("smiles2ctab", "descriptors", "canonicalizeSmiles"):
            mols = []
            problems = []
            for lineno, line in _body_lines(text):
                try:
                    mols.append(parse_smiles(line))
                except ChemserveError as exc:
                    problems.append({"line": lineno, "reason": str(exc)})
            if problems:
                raise ApiError(400, "unparseable SMILES input", errors=problems)
            if op == "smiles2ctab":
                sdf = write_sdf([SdfEntry(m) for m in mols])
                return Response(content=sdf, media_type=SDF_MEDIA)
            if op == "descriptors":
                payload = [
                    DescriptorModel(**compute_descriptors(m).as_dict()).model_dump()
                    for m in mols
                ]
                return Response(content=json.dumps(payload), media_type="application/json")
            out = "".join(write_smiles(m) + "\n" for m in mols)
            return Response(content=out, media_type="text/plain")

        # SDF-bodied operations
        try:
            entries = parse_sdf(text)
        except ChemserveError as exc:
            raise ApiError(400, f"unparseable SDF body: {exc}") from None
        if op == "ctab2smiles":
            out = "".join(write_smiles(e.molecule) + "\n" for e in entries)
            return Response(content=out, media_type="text/plain")
        if len(entries) < 2:
            raise ApiError(400, "mcs needs an SDF with at least 2 records")
        result = max_common_substructure([e.molecule for e in entries])
        return Response(content=result.smiles + "\n", media_type="text/plain")

    return app
