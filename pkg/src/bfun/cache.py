"""Content-addressed disk cache for serialized symbolic results."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import time
from pathlib import Path

from bfun import __version__

log = logging.getLogger(__name__)

ENV_VAR = "BFUN_CACHE"
VERSION_TAG = f"bfun-{__version__}"


def cache_key(op: str, params: dict, version: str = VERSION_TAG) -> str:
    blob = json.dumps({"op": op, "params": params, "version": version}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _digest(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()


class Cache:
    """Entries are JSON files named by key; payloads are text serializations.

    A missing, stale or corrupted entry reads as a miss.  If the directory
    cannot be written the cache disables itself with a warning.
    """

    def __init__(self, directory: str | os.PathLike | None, version: str = VERSION_TAG):
        self.version = version
        self.enabled = directory is not None
        self.dir = Path(directory) if directory is not None else None
        if self.enabled:
            try:
                self.dir.mkdir(parents=True, exist_ok=True)
                probe = tempfile.NamedTemporaryFile(dir=self.dir, delete=True)
                probe.close()
            except OSError as exc:
                log.warning("cache directory %s is not writable (%s); caching disabled", self.dir, exc)
                self.enabled = False

    @classmethod
    def from_env(cls, directory=None) -> "Cache":
        return cls(directory if directory is not None else os.environ.get(ENV_VAR))

    def _path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def get(self, op: str, params: dict) -> str | None:
        if not self.enabled:
            return None
        path = self._path(cache_key(op, params, self.version))
        try:
            entry = json.loads(path.read_text())
        except FileNotFoundError:
            return None
        except (OSError, ValueError):
            log.warning("unreadable cache entry %s; recomputing", path.name)
            return None
        if entry.get("version") != self.version:
            return None
        payload = entry.get("payload")
        if not isinstance(payload, str) or _digest(payload) != entry.get("sha256"):
            log.warning("cache entry %s failed its hash check; recomputing", path.name)
            return None
        return payload

    def put(self, op: str, params: dict, payload: str) -> bool:
        if not self.enabled:
            return False
        key = cache_key(op, params, self.version)
        entry = {
            "op": op,
            "params": params,
            "version": self.version,
            "created": time.time(),
            "sha256": _digest(payload),
            "payload": payload,
        }
        try:
            fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, self._path(key))
        except OSError as exc:
            log.warning("cache write failed (%s); caching disabled", exc)
            self.enabled = False
            return False
        return True

    def cached(self, op: str, params: dict, compute, dump, load):
        """load(payload) on a hit; otherwise compute(), store dump(value), return it."""
        hit = self.get(op, params)
        if hit is not None:
            return load(hit)
        value = compute()
        self.put(op, params, dump(value))
        return value
