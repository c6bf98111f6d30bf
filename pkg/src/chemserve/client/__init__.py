"""Lazy caching client for the REST service."""

from chemserve.client.cache import DEFAULT_TTL, ResponseCache, cache_dir, clear_cache
from chemserve.client.lazy import DEFAULT_PAGE_SIZE, ClientContext, LazyQuery, Transport, resource

__all__ = [
    "DEFAULT_PAGE_SIZE",
    "DEFAULT_TTL",
    "ClientContext",
    "LazyQuery",
    "ResponseCache",
    "Transport",
    "cache_dir",
    "clear_cache",
    "resource",
]
