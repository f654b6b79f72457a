"""SQLite-backed store: durable across process restarts.

Rows hold the canonical JSON document for each record plus the columns the
queries filter on. Access is serialized by the base-class lock, so one
connection shared across threads is safe (check_same_thread=False).
"""

from __future__ import annotations

import json
import sqlite3
from pathlib import Path

from ..clock import Clock
from ..suggest.models import SuggestionSet
from ..trends.models import TrendSnapshot
from .base import EditorialStore
from .records import Draft, Pitch

_SCHEMA = """
CREATE TABLE IF NOT EXISTS pitches (
    pitch_id TEXT PRIMARY KEY,
    payload  TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS suggestion_sets (
    suggestion_id TEXT PRIMARY KEY,
    pitch_id      TEXT NOT NULL REFERENCES pitches(pitch_id),
    payload       TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_suggestions_pitch ON suggestion_sets(pitch_id);
CREATE TABLE IF NOT EXISTS drafts (
    pitch_id TEXT PRIMARY KEY REFERENCES pitches(pitch_id),
    payload  TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS snapshots (
    snapshot_id TEXT PRIMARY KEY,
    provider_id TEXT NOT NULL,
    region      TEXT NOT NULL,
    cycle_seq   INTEGER NOT NULL,
    payload     TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS seqs (
    kind  TEXT PRIMARY KEY,
    value INTEGER NOT NULL
);
"""


class SqliteStore(EditorialStore):
    def __init__(self, path: str | Path, clock: Clock | None = None):
        super().__init__(clock)
        self._path = str(path)
        # base lock serializes all access, so one shared connection is fine
        self._conn = sqlite3.connect(self._path, check_same_thread=False)
        self._conn.executescript(_SCHEMA)
        self._conn.commit()

    def close(self) -> None:
        with self._lock:
            self._conn.commit()
            self._conn.close()

    def _one(self, sql: str, args: tuple) -> tuple | None:
        cur = self._conn.execute(sql, args)
        return cur.fetchone()

    def _load_pitch(self, pitch_id: str) -> Pitch | None:
        row = self._one("SELECT payload FROM pitches WHERE pitch_id = ?", (pitch_id,))
        return Pitch.from_dict(json.loads(row[0])) if row else None

    def _write_pitch(self, pitch: Pitch) -> None:
        self._conn.execute(
            "INSERT OR REPLACE INTO pitches (pitch_id, payload) VALUES (?, ?)",
            (pitch.pitch_id, json.dumps(pitch.to_dict(), ensure_ascii=False)),
        )
        self._conn.commit()

    def _load_all_pitches(self) -> list[Pitch]:
        rows = self._conn.execute("SELECT payload FROM pitches").fetchall()
        return [Pitch.from_dict(json.loads(r[0])) for r in rows]

    def _load_suggestion(self, suggestion_id: str) -> SuggestionSet | None:
        row = self._one(
            "SELECT payload FROM suggestion_sets WHERE suggestion_id = ?", (suggestion_id,)
        )
        return SuggestionSet.from_dict(json.loads(row[0])) if row else None

    def _write_suggestion(self, suggestion: SuggestionSet) -> None:
        self._conn.execute(
            "INSERT OR REPLACE INTO suggestion_sets (suggestion_id, pitch_id, payload)"
            " VALUES (?, ?, ?)",
            (
                suggestion.suggestion_id,
                suggestion.pitch_id,
                json.dumps(suggestion.to_dict(), ensure_ascii=False),
            ),
        )
        self._conn.commit()

    def _load_suggestions_for(self, pitch_id: str) -> list[SuggestionSet]:
        rows = self._conn.execute(
            "SELECT payload FROM suggestion_sets WHERE pitch_id = ?", (pitch_id,)
        ).fetchall()
        return [SuggestionSet.from_dict(json.loads(r[0])) for r in rows]

    def _load_draft(self, pitch_id: str) -> Draft | None:
        row = self._one("SELECT payload FROM drafts WHERE pitch_id = ?", (pitch_id,))
        return Draft.from_dict(json.loads(row[0])) if row else None

    def _write_draft(self, draft: Draft) -> None:
        self._conn.execute(
            "INSERT OR REPLACE INTO drafts (pitch_id, payload) VALUES (?, ?)",
            (draft.pitch_id, json.dumps(draft.to_dict(), ensure_ascii=False)),
        )
        self._conn.commit()

    def _write_snapshot(self, snapshot: TrendSnapshot) -> None:
        self._conn.execute(
            "INSERT OR REPLACE INTO snapshots"
            " (snapshot_id, provider_id, region, cycle_seq, payload) VALUES (?, ?, ?, ?, ?)",
            (
                snapshot.snapshot_id,
                snapshot.provider_id,
                snapshot.region,
                snapshot.cycle_seq,
                json.dumps(snapshot.to_dict(), ensure_ascii=False),
            ),
        )
        self._conn.commit()

    def _load_all_snapshots(self) -> list[TrendSnapshot]:
        rows = self._conn.execute("SELECT payload FROM snapshots").fetchall()
        return [TrendSnapshot.from_dict(json.loads(r[0])) for r in rows]

    def _delete_snapshots(self, snapshot_ids: list[str]) -> None:
        self._conn.executemany(
            "DELETE FROM snapshots WHERE snapshot_id = ?", [(s,) for s in snapshot_ids]
        )
        self._conn.commit()

    def _next_seq(self, kind: str) -> int:
        self._conn.execute(
            "INSERT INTO seqs (kind, value) VALUES (?, 0)"
            " ON CONFLICT(kind) DO NOTHING",
            (kind,),
        )
        self._conn.execute("UPDATE seqs SET value = value + 1 WHERE kind = ?", (kind,))
        row = self._one("SELECT value FROM seqs WHERE kind = ?", (kind,))
        self._conn.commit()
        assert row is not None
        return row[0]
