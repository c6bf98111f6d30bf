"""On-disk response cache keyed by request URL.

Entries live as ``<sha256(url)>.body`` plus a ``.meta`` JSON sidecar with
the URL and storage timestamp. Writes go through a temp file and
``os.replace`` so concurrent writers of one key serialize to a complete
entry. The directory comes from the explicit argument, the
CHEMSERVE_CACHE_DIR environment variable, or ``~/.cache/chemserve``.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from pathlib import Path

DEFAULT_TTL = 24 * 3600.0


def cache_dir(explicit: str | os.PathLike | None = None) -> Path:
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get("CHEMSERVE_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "chemserve"


def _key(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest()


class ResponseCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = cache_dir(directory)

    def get(self, url: str, ttl: float) -> bytes | None:
        """Body bytes when a fresh entry exists, else None."""
        base = self.directory / _key(url)
        meta_path = base.with_suffix(".meta")
        body_path = base.with_suffix(".body")
        try:
            meta = json.loads(meta_path.read_text("utf-8"))
            if time.time() - float(meta["stored_at"]) >= ttl:
                return None
            return body_path.read_bytes()
        except (OSError, ValueError, KeyError):
            return None

    def put(self, url: str, body: bytes) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        base = self.directory / _key(url)
        for suffix, payload in (
            (".body", body),
            (".meta", json.dumps({"url": url, "stored_at": time.time()}).encode("utf-8")),
        ):
            tmp = base.with_suffix(suffix + ".tmp")
            tmp.write_bytes(payload)
            os.replace(tmp, base.with_suffix(suffix))

    def clear(self, url_prefix: str) -> int:
        """Drop all entries whose URL starts with the prefix; returns count."""
        removed = 0
        if not self.directory.is_dir():
            return 0
        for meta_path in self.directory.glob("*.meta"):
            try:
                meta = json.loads(meta_path.read_text("utf-8"))
            except (OSError, ValueError):
                continue
            if str(meta.get("url", "")).startswith(url_prefix):
                for path in (meta_path, meta_path.with_suffix(".body")):
                    try:
                        path.unlink()
                    except OSError:
                        pass
                removed += 1
        return removed


def clear_cache(base_url: str, directory: str | os.PathLike | None = None) -> int:
    """Remove all cached responses for an origin."""
    return ResponseCache(directory).clear(base_url)
