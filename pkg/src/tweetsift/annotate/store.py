"""Append-only label storage.

Every submission is one JSON line; resubmissions append a new line and the
latest record per (round, tweet, coder) is the current one. History is
never rewritten.
"""

from __future__ import annotations

import csv
import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .rules import DimensionAnnotation


@dataclass(frozen=True)
class LabelRecord:
    round_id: str
    tweet_id: str
    coder: str
    category: str
    dims: DimensionAnnotation | None = None
    is_override: bool = False
    timestamp: str = ""
    seq: int = 0
    hints: tuple[str, ...] = ()
    client_key: str | None = None

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "round": self.round_id,
            "tweet_id": self.tweet_id,
            "coder": self.coder,
            "category": self.category,
            "dimensions": self.dims.to_dict() if self.dims else None,
            "is_override": self.is_override,
            "timestamp": self.timestamp,
            "hints": list(self.hints),
            "client_key": self.client_key,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LabelRecord":
        dims = data.get("dimensions")
        return cls(
            round_id=data["round"],
            tweet_id=data["tweet_id"],
            coder=data["coder"],
            category=data["category"],
            dims=DimensionAnnotation.from_dict(dims) if dims else None,
            is_override=bool(data.get("is_override", False)),
            timestamp=data.get("timestamp", ""),
            seq=int(data.get("seq", 0)),
            hints=tuple(data.get("hints", ())),
            client_key=data.get("client_key"),
        )


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


EXPORT_COLUMNS = ["id", "coder", "category", "round", "timestamp",
                  "message_type", "perspective", "person", "serious",
                  "focus_on_bereaved", "mentions_case", "is_override"]


class LabelStore:
    """In-memory record list, optionally mirrored to a JSONL file."""

    def __init__(self, path: str | Path | None = None, clock=_utc_now):
        self._path = Path(path) if path else None
        self._clock = clock
        self._records: list[LabelRecord] = []
        self._lock = threading.Lock()
        if self._path and self._path.exists():
            with open(self._path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        self._records.append(LabelRecord.from_dict(json.loads(line)))

    def __len__(self):
        return len(self._records)

    def append(self, round_id: str, tweet_id: str, coder: str, category: str,
               dims: DimensionAnnotation | None = None, is_override: bool = False,
               hints: tuple[str, ...] = (), client_key: str | None = None) -> LabelRecord:
        with self._lock:
            if client_key is not None:
                existing = self._find_by_key(round_id, tweet_id, coder, client_key)
                if existing is not None:
                    return existing
            record = LabelRecord(
                round_id=round_id, tweet_id=tweet_id, coder=coder, category=category,
                dims=dims, is_override=is_override, timestamp=self._clock(),
                seq=len(self._records) + 1, hints=hints, client_key=client_key,
            )
            self._records.append(record)
            if self._path:
                with open(self._path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
            return record

    def _find_by_key(self, round_id, tweet_id, coder, client_key):
        for record in reversed(self._records):
            if (record.round_id == round_id and record.tweet_id == tweet_id
                    and record.coder == coder and record.client_key == client_key):
                return record
        return None

    def history(self, round_id: str | None = None) -> list[LabelRecord]:
        with self._lock:
            if round_id is None:
                return list(self._records)
            return [r for r in self._records if r.round_id == round_id]

    def current(self, round_id: str | None = None,
                include_overrides: bool = True) -> dict[tuple[str, str, str], LabelRecord]:
        """Latest record per (round, tweet, coder)."""
        out: dict[tuple[str, str, str], LabelRecord] = {}
        for record in self.history(round_id):
            if record.is_override and not include_overrides:
                continue
            out[(record.round_id, record.tweet_id, record.coder)] = record
        return out

    def export_csv(self, path, round_ids: list[str] | None = None) -> int:
        """Write current labels as CSV with dimension columns; returns row count."""
        rows = 0
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(EXPORT_COLUMNS)
            for record in sorted(self.current().values(), key=lambda r: r.seq):
                if round_ids is not None and record.round_id not in round_ids:
                    continue
                dims = record.dims
                writer.writerow([
                    record.tweet_id, record.coder, record.category,
                    record.round_id, record.timestamp,
                    dims.message_type.value if dims else "",
                    dims.perspective.value if dims else "",
                    dims.person.value if dims else "",
                    "" if dims is None else str(dims.serious).lower(),
                    "" if dims is None else str(dims.focus_on_bereaved).lower(),
                    "" if dims is None else str(dims.mentions_case).lower(),
                    str(record.is_override).lower(),
                ])
                rows += 1
        return rows
