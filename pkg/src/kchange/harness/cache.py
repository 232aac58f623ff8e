"""Append-only JSON-lines cache of solve results."""

from __future__ import annotations

import fcntl
import json
import os
import threading
import time
from dataclasses import asdict, dataclass
from typing import Optional

from .. import __version__

REQUIRED = ("problem", "params", "k", "lower", "upper", "complete", "version")


@dataclass(frozen=True)
class CacheRecord:
    problem: str
    params: dict
    k: int
    lower: int
    upper: int
    complete: bool
    nodes: int = 0
    millis: float = 0.0
    version: str = __version__
    timestamp: float = 0.0

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.complete else None

    def key(self) -> tuple:
        return (self.problem, json.dumps(self.params, sort_keys=True), self.k, self.version)

    def to_json(self) -> str:
        d = asdict(self)
        d["value"] = self.value
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "CacheRecord":
        if any(f not in d for f in REQUIRED) or not isinstance(d["params"], dict):
            raise ValueError("missing fields")
        rec = cls(
            problem=str(d["problem"]),
            params=d["params"],
            k=int(d["k"]),
            lower=int(d["lower"]),
            upper=int(d["upper"]),
            complete=bool(d["complete"]),
            nodes=int(d.get("nodes", 0)),
            millis=float(d.get("millis", 0.0)),
            version=str(d["version"]),
            timestamp=float(d.get("timestamp", 0.0)),
        )
        if rec.lower > rec.upper or (rec.complete and rec.lower != rec.upper):
            raise ValueError("inconsistent bounds")
        return rec


class ResultCache:
    """Line-delimited JSON records; the newest matching record wins.

    Lines that fail to parse are skipped and counted in ``warnings``.  Records
    from another package version never match.  Appends hold both a process
    lock and an exclusive file lock.
    """

    _lock = threading.Lock()

    def __init__(self, path: str, version: str = __version__):
        self.path = path
        self.version = version
        self.warnings = 0

    def records(self) -> list[CacheRecord]:
        self.warnings = 0
        if not os.path.exists(self.path):
            return []
        out = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                try:
                    out.append(CacheRecord.from_dict(json.loads(line)))
                except (ValueError, TypeError, AttributeError):
                    self.warnings += 1
        return out

    def lookup(self, problem: str, params: dict, k: int, allow_incomplete: bool = False) -> Optional[CacheRecord]:
        """Newest exact record for the key; with ``allow_incomplete`` the newest bounds record as fallback."""
        want = (problem, json.dumps(params, sort_keys=True), k, self.version)
        exact = partial = None
        for rec in self.records():
            if rec.key() != want:
                continue
            if rec.complete:
                exact = rec
            else:
                partial = rec
        if exact is not None:
            return exact
        return partial if allow_incomplete else None

    def store(self, rec: CacheRecord) -> None:
        if not rec.timestamp:
            rec = CacheRecord(**{**asdict(rec), "timestamp": time.time()})
        directory = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(directory, exist_ok=True)
        line = rec.to_json() + "\n"
        with self._lock, open(self.path, "a", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write(line)
                fh.flush()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
