"""On-disk JSON cache of idempotent decompositions."""
from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path
from typing import Callable

from .groups import FiniteGroup
from .idempotents import IdempotentDecomposition

ENV_VAR = "GRLAB_CACHE_DIR"
DEFAULT_DIR = ".grlab-cache"


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text).strip("_") or "x"


class DecompositionCache:
    """Files ``<group>-o<order>-p<p>-k<k>-<tag>-s<seed>.json`` under one directory.

    The seed is part of the key because splitting uses seeded randomness.
    Writes go through a temporary file so parallel workers never see a
    partial entry.
    """

    def __init__(self, root: str | os.PathLike | None = None, enabled: bool = True):
        self.root = Path(root or os.environ.get(ENV_VAR) or DEFAULT_DIR)
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def path(self, group: FiniteGroup, p: int, k: int, tag: str, seed: int) -> Path:
        return self.root / f"{_slug(group.name)}-o{group.order}-p{p}-k{k}-{_slug(tag)}-s{seed}.json"

    def get(self, group, p, k, tag, seed) -> IdempotentDecomposition | None:
        if not self.enabled:
            return None
        path = self.path(group, p, k, tag, seed)
        try:
            data = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        if data.get("table") != group.table.tolist():
            return None
        return IdempotentDecomposition.from_json(data["decomposition"], group)

    def put(self, group, p, k, tag, seed, dec: IdempotentDecomposition) -> None:
        if not self.enabled:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        payload = {"group": group.name, "table": group.table.tolist(), "p": p, "k": k,
                   "tag": tag, "seed": seed, "decomposition": dec.to_json()}
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, sort_keys=True)
        os.replace(tmp, self.path(group, p, k, tag, seed))

    def get_or_compute(self, group, p, k, tag, seed,
                       compute: Callable[[], IdempotentDecomposition]) -> IdempotentDecomposition:
        dec = self.get(group, p, k, tag, seed)
        if dec is not None:
            self.hits += 1
            return dec
        self.misses += 1
        dec = compute()
        self.put(group, p, k, tag, seed, dec)
        return dec
