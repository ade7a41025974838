"""Crash-safe append-only event log backing the annotation service.

One JSON event per line. Appends are flushed and fsynced before they are
acknowledged, so an acknowledged write survives a crash; a torn final line
(crash mid-write) is detected and ignored on replay.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Iterator, Optional


class AnnotationLogStore:
    def __init__(self, path: str | Path, fsync: bool = True):
        self.path = Path(path)
        self.fsync = fsync
        self._lock = threading.Lock()
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")

    def append(self, event: dict) -> None:
        """Durably append one event; returns only once it is on disk."""
        line = json.dumps(event, ensure_ascii=False)
        with self._lock:
            self._fh.write(line + "\n")
            self._fh.flush()
            if self.fsync:
                os.fsync(self._fh.fileno())

    def events(self) -> Iterator[dict]:
        """Replay all complete events; a torn trailing line is skipped."""
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            lines = fh.read().split("\n")
        for idx, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError:
                if idx == len(lines) - 1:
                    return  # torn write at the tail: drop it
                raise

    def compact(self) -> int:
        """Rewrite the log atomically, dropping blank/torn lines. Returns count kept."""
        events = list(self.events())
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with self._lock:
            self._fh.close()
            with open(tmp, "w", encoding="utf-8") as fh:
                for event in events:
                    fh.write(json.dumps(event, ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.path)
            self._fh = open(self.path, "a", encoding="utf-8")
        return len(events)

    def close(self) -> None:
        with self._lock:
            if not self._fh.closed:
                self._fh.close()

    def __enter__(self) -> "AnnotationLogStore":
        return self

    def __exit__(self, *exc) -> Optional[bool]:
        self.close()
        return None
