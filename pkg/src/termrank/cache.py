"""Content-addressed stage caching.

A stage's cache key is the SHA-256 of a version byte, the canonical JSON
of the stage's configuration, and the sorted keys of its upstream stages,
so any change anywhere in the configuration chain lands in a fresh slot.
Payloads are pickled with their own format version; unreadable or stale
entries are treated as misses, never as errors.
"""

import hashlib
import logging
import os
import pickle
import tempfile
from pathlib import Path

from .config import canonical_json

__all__ = ["CACHE_KEY_VERSION", "PAYLOAD_VERSION", "DEFAULT_CACHE_DIR",
           "CACHE_DIR_ENV", "cache_key", "Cacher", "resolve_cache_dir"]

CACHE_KEY_VERSION = 1
PAYLOAD_VERSION = 1
DEFAULT_CACHE_DIR = ".atr-cache"
CACHE_DIR_ENV = "TERMRANK_CACHE_DIR"

logger = logging.getLogger(__name__)


def cache_key(stage_config, upstream_keys=()):
    """Hex digest addressing one stage's output."""
    data = (
        bytes([CACHE_KEY_VERSION])
        + canonical_json(stage_config).encode("utf-8")
        + "".join(sorted(upstream_keys)).encode("ascii")
    )
    return hashlib.sha256(data).hexdigest()


def resolve_cache_dir(flag_value=None):
    """Flag beats environment beats the default ``./.atr-cache``."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return Path(env)
    return Path(DEFAULT_CACHE_DIR)


class Cacher:
    """Pickle store addressed by cache keys; writes are atomic."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def _path(self, key):
        return self.directory / f"{key}.pkl"

    def get(self, key):
        """(hit, payload); corrupted entries log a warning and miss."""
        path = self._path(key)
        if not path.exists():
            return False, None
        try:
            with open(path, "rb") as fh:
                entry = pickle.load(fh)
            if entry.get("version") != PAYLOAD_VERSION:
                logger.warning("cache entry %s has stale format; recomputing", key)
                return False, None
            return True, entry["payload"]
        except Exception as exc:
            logger.warning("cache entry %s unreadable (%s); recomputing", key, exc)
            return False, None

    def put(self, key, payload):
        self.directory.mkdir(parents=True, exist_ok=True)
        entry = {"version": PAYLOAD_VERSION, "payload": payload}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                pickle.dump(entry, fh, protocol=pickle.HIGHEST_PROTOCOL)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
