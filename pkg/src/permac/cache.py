"""Content-addressed JSON cache for expensive tables.

Keys combine module, operation and a canonical parameter serialization; the
payload schema is versioned and stale versions are ignored.  The cache
directory comes from configure() or the PERMAC_CACHE_DIR environment
variable; without either, caching is an in-memory no-op beyond the tables'
own memoization.
"""

from __future__ import annotations

import hashlib
import json
import os

CACHE_VERSION = 1
_cache_dir = None


def configure(path):
    global _cache_dir
    _cache_dir = path


def cache_dir():
    if _cache_dir is not None:
        return _cache_dir
    return os.environ.get("PERMAC_CACHE_DIR")


def _path_for(module: str, operation: str, params: dict):
    base = cache_dir()
    if not base:
        return None
    canon = json.dumps({"module": module, "op": operation, "params": params},
                       sort_keys=True)
    digest = hashlib.sha256(canon.encode()).hexdigest()[:24]
    return os.path.join(base, f"{module}.{operation}.{digest}.json")


def load(module: str, operation: str, params: dict):
    path = _path_for(module, operation, params)
    if not path or not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    if data.get("version") != CACHE_VERSION:
        return None
    return data


def store(module: str, operation: str, params: dict, payload: dict):
    path = _path_for(module, operation, params)
    if not path:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    payload = dict(payload)
    payload["version"] = CACHE_VERSION
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, sort_keys=True)
    os.replace(tmp, path)
