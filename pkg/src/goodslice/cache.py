"""On-disk cache of slice restrictions.

One JSON file per (type, rank, partition, normalisation, version).  Entries
hold the restrictions in canonical text with a sha256 of that text and are
written to a temporary file and renamed, so a reader sees either a complete
entry or none.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from . import __version__
from .multipoly import SparsePoly, format_poly, parse_poly

NORMALIZATION = "trace-form"
ENV_VAR = "GOODSLICE_CACHE_DIR"


def default_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "goodslice"


def cache_key(type_name: str, partition: str, normalization: str = NORMALIZATION, version: str = __version__) -> str:
    return f"{type_name}|{partition}|{normalization}|{version}"


def _digest(texts: list[str]) -> str:
    return hashlib.sha256("\n".join(texts).encode()).hexdigest()


class RestrictionCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else default_dir()

    def _path(self, key: str) -> Path:
        return self.directory / (hashlib.sha256(key.encode()).hexdigest()[:32] + ".json")

    def load(self, key: str, nvars: int) -> list[SparsePoly] | None:
        path = self._path(key)
        try:
            entry = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        texts = entry.get("kappa")
        if entry.get("key") != key or entry.get("nvars") != nvars or not isinstance(texts, list):
            return None
        if entry.get("sha256") != _digest(texts):
            return None
        try:
            return [parse_poly(t, "t", nvars) for t in texts]
        except (ValueError, KeyError):
            return None

    def store(self, key: str, kappas: list[SparsePoly]) -> Path:
        texts = [format_poly(k) for k in kappas]
        nvars = kappas[0].nvars if kappas else 0
        entry = {"key": key, "nvars": nvars, "sha256": _digest(texts), "kappa": texts}
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self._path(key)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path
