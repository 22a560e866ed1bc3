"""Optional on-disk memo for expensive per-(genus, degree) constructions.

Set ``SURFACELIE_CACHE_DIR`` to a writable directory to enable it.  Entries
are pickles keyed by name and a format version; anything unreadable is
recomputed and overwritten.
"""
from __future__ import annotations

import os
import pickle
import tempfile
from pathlib import Path

ENV_VAR = "SURFACELIE_CACHE_DIR"
FORMAT = 1


def cache_dir() -> Path | None:
    d = os.environ.get(ENV_VAR)
    return Path(d) if d else None


def cached(name: str, build):
    """Return ``build()``, memoized on disk under ``name`` when the cache is enabled."""
    d = cache_dir()
    if d is None:
        return build()
    path = d / f"{name}.v{FORMAT}.pkl"
    try:
        with path.open("rb") as fh:
            return pickle.load(fh)
    except (OSError, pickle.UnpicklingError, EOFError, AttributeError):
        pass
    value = build()
    try:
        d.mkdir(parents=True, exist_ok=True)
        # write then rename so concurrent readers never see a partial file
        fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
        with os.fdopen(fd, "wb") as fh:
            pickle.dump(value, fh)
        os.replace(tmp, path)
    except OSError:
        pass
    return value
