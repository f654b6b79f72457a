"""In-memory store backend for tests and throwaway runs."""

from __future__ import annotations

from ..clock import Clock
from ..suggest.models import SuggestionSet
from ..trends.models import TrendSnapshot
from .base import EditorialStore
from .records import Draft, Pitch


class MemoryStore(EditorialStore):
    def __init__(self, clock: Clock | None = None):
        super().__init__(clock)
        self._pitches: dict[str, Pitch] = {}
        self._suggestions: dict[str, SuggestionSet] = {}
        self._drafts: dict[str, Draft] = {}  # keyed by pitch_id
        self._snapshots: dict[str, TrendSnapshot] = {}
        self._seqs: dict[str, int] = {}

    def _load_pitch(self, pitch_id: str) -> Pitch | None:
        return self._pitches.get(pitch_id)

    def _write_pitch(self, pitch: Pitch) -> None:
        self._pitches[pitch.pitch_id] = pitch

    def _load_all_pitches(self) -> list[Pitch]:
        return list(self._pitches.values())

    def _load_suggestion(self, suggestion_id: str) -> SuggestionSet | None:
        return self._suggestions.get(suggestion_id)

    def _write_suggestion(self, suggestion: SuggestionSet) -> None:
        self._suggestions[suggestion.suggestion_id] = suggestion

    def _load_suggestions_for(self, pitch_id: str) -> list[SuggestionSet]:
        return [s for s in self._suggestions.values() if s.pitch_id == pitch_id]

    def _load_draft(self, pitch_id: str) -> Draft | None:
        return self._drafts.get(pitch_id)

    def _write_draft(self, draft: Draft) -> None:
        self._drafts[draft.pitch_id] = draft

    def _write_snapshot(self, snapshot: TrendSnapshot) -> None:
        self._snapshots[snapshot.snapshot_id] = snapshot

    def _load_all_snapshots(self) -> list[TrendSnapshot]:
        return list(self._snapshots.values())

    def _delete_snapshots(self, snapshot_ids: list[str]) -> None:
        for snapshot_id in snapshot_ids:
            self._snapshots.pop(snapshot_id, None)

    def _next_seq(self, kind: str) -> int:
        self._seqs[kind] = self._seqs.get(kind, 0) + 1
        return self._seqs[kind]
