"""Editorial store: workflow rules over swappable persistence backends.

All the rules live here — the pitch status machine, optimistic draft
versioning, snapshot monotonicity, pagination — on top of a small set of
primitive accessors each backend implements. Backends only move bytes.

A single re-entrant lock serializes every public operation: writes are
linearizable (exactly one of N racing saves with the same expected_version
wins) and readers never observe a half-applied update. Pitches are
append-only; there is no delete.
"""

from __future__ import annotations

import threading
from dataclasses import replace
from datetime import datetime

from ..clock import Clock, SystemClock
from ..suggest.models import IdeationContext, SuggestionSet, validate_context
from ..trends.models import TrendSnapshot, TrendTerm
from ..trends.normalize import normalize_term
from .records import PITCH_ORIGINS, STATUS_TRANSITIONS, Draft, Pitch


class PitchNotFound(LookupError):
    pass


class SuggestionNotFound(LookupError):
    pass


class DraftNotFound(LookupError):
    pass


class MissingTrendRef(ValueError):
    pass


class VersionConflict(RuntimeError):
    def __init__(self, current_version: int):
        super().__init__(f"expected_version does not match current version {current_version}")
        self.current_version = current_version


class IllegalState(RuntimeError):
    """Operation not allowed for the pitch's current status."""


class StaleSnapshot(ValueError):
    """cycle_seq did not advance for its provider+region."""


class StorageFailure(RuntimeError):
    pass


class InvalidPage(ValueError):
    pass


class InvalidRetention(ValueError):
    pass


MAX_PAGE_LIMIT = 100


class EditorialStore:
    def __init__(self, clock: Clock | None = None):
        self.clock = clock or SystemClock()
        self._lock = threading.RLock()

    # ------------------------------------------------------------------
    # backend primitives
    # ------------------------------------------------------------------

    def _load_pitch(self, pitch_id: str) -> Pitch | None:
        raise NotImplementedError

    def _write_pitch(self, pitch: Pitch) -> None:
        raise NotImplementedError

    def _load_all_pitches(self) -> list[Pitch]:
        raise NotImplementedError

    def _load_suggestion(self, suggestion_id: str) -> SuggestionSet | None:
        raise NotImplementedError

    def _write_suggestion(self, suggestion: SuggestionSet) -> None:
        raise NotImplementedError

    def _load_suggestions_for(self, pitch_id: str) -> list[SuggestionSet]:
        raise NotImplementedError

    def _load_draft(self, pitch_id: str) -> Draft | None:
        raise NotImplementedError

    def _write_draft(self, draft: Draft) -> None:
        raise NotImplementedError

    def _write_snapshot(self, snapshot: TrendSnapshot) -> None:
        raise NotImplementedError

    def _load_all_snapshots(self) -> list[TrendSnapshot]:
        raise NotImplementedError

    def _delete_snapshots(self, snapshot_ids: list[str]) -> None:
        raise NotImplementedError

    def _next_seq(self, kind: str) -> int:
        raise NotImplementedError

    def close(self) -> None:
        pass

    # ------------------------------------------------------------------
    # pitches
    # ------------------------------------------------------------------

    def create_pitch(
        self,
        context: IdeationContext,
        origin: str,
        trend_ref: str | None = None,
    ) -> Pitch:
        context = validate_context(context)
        if origin not in PITCH_ORIGINS:
            raise ValueError(f"origin must be one of {', '.join(PITCH_ORIGINS)}")
        if origin == "trend" and not trend_ref:
            raise MissingTrendRef("origin=trend requires a trend_ref")
        with self._lock:
            now = self.clock.now()
            pitch = Pitch(
                pitch_id=f"p-{self._next_seq('pitch')}",
                origin=origin,
                trend_ref=trend_ref,
                context=context,
                status="ideation",
                created_at=now,
                updated_at=now,
            )
            self._write_pitch(pitch)
            return pitch

    def get_pitch(self, pitch_id: str) -> Pitch:
        with self._lock:
            pitch = self._load_pitch(pitch_id)
        if pitch is None:
            raise PitchNotFound(pitch_id)
        return pitch

    def _transition(self, pitch: Pitch, new_status: str) -> Pitch:
        if new_status != pitch.status and new_status not in STATUS_TRANSITIONS[pitch.status]:
            raise IllegalState(f"cannot move pitch from {pitch.status} to {new_status}")
        return replace(pitch, status=new_status, updated_at=self.clock.now())

    def list_pitches(
        self,
        status: str | None = None,
        origin: str | None = None,
        text: str | None = None,
        offset: int = 0,
        limit: int = 50,
    ) -> tuple[list[Pitch], int]:
        """Filtered page of pitches plus the filter-wide total count.

        Order: updated_at descending, pitch_id ascending on ties.
        """
        if not 1 <= limit <= MAX_PAGE_LIMIT or offset < 0:
            raise InvalidPage(f"limit must be in 1..{MAX_PAGE_LIMIT} and offset >= 0")
        with self._lock:
            pitches = self._load_all_pitches()
            matched = []
            needle = text.casefold() if text else None
            for pitch in pitches:
                if status is not None and pitch.status != status:
                    continue
                if origin is not None and pitch.origin != origin:
                    continue
                if needle is not None:
                    draft = self._load_draft(pitch.pitch_id)
                    haystack = pitch.context.topic.casefold()
                    if draft is not None:
                        haystack += "\n" + draft.title.casefold()
                    if needle not in haystack:
                        continue
                matched.append(pitch)
        matched.sort(key=lambda p: (-p.updated_at.timestamp(), p.pitch_id))
        return matched[offset:offset + limit], len(matched)

    # ------------------------------------------------------------------
    # suggestion sets
    # ------------------------------------------------------------------

    def new_suggestion_id(self) -> str:
        with self._lock:
            return f"s-{self._next_seq('suggestion')}"

    def attach_suggestion_set(self, pitch_id: str, suggestion: SuggestionSet) -> Pitch:
        if suggestion.pitch_id != pitch_id:
            raise ValueError("suggestion.pitch_id does not match pitch_id")
        with self._lock:
            pitch = self.get_pitch(pitch_id)
            if pitch.status == "done":
                raise IllegalState("pitch is finalized; no further suggestions")
            if suggestion.parent_id is not None:
                parent = self._load_suggestion(suggestion.parent_id)
                if parent is None or parent.pitch_id != pitch_id:
                    raise SuggestionNotFound(suggestion.parent_id)
            # drafting pitches keep their status; ideation moves to suggested
            new_status = "suggested" if pitch.status in ("ideation", "suggested") else pitch.status
            pitch = self._transition(pitch, new_status)
            self._write_suggestion(suggestion)
            self._write_pitch(pitch)
            return pitch

    def get_suggestion_set(self, suggestion_id: str) -> SuggestionSet:
        with self._lock:
            suggestion = self._load_suggestion(suggestion_id)
        if suggestion is None:
            raise SuggestionNotFound(suggestion_id)
        return suggestion

    def list_suggestion_sets(self, pitch_id: str) -> list[SuggestionSet]:
        with self._lock:
            self.get_pitch(pitch_id)
            suggestions = self._load_suggestions_for(pitch_id)
        suggestions.sort(key=lambda s: (s.created_at, s.suggestion_id))
        return suggestions

    # ------------------------------------------------------------------
    # drafts
    # ------------------------------------------------------------------

    def save_draft(self, pitch_id: str, title: str, body: str, expected_version: int) -> Draft:
        """Optimistic-concurrency save. First save requires expected_version=0."""
        with self._lock:
            pitch = self.get_pitch(pitch_id)
            if pitch.status not in ("suggested", "drafting"):
                raise IllegalState(f"cannot save a draft while pitch is {pitch.status}")
            current = self._load_draft(pitch_id)
            current_version = current.version if current else 0
            if expected_version != current_version:
                raise VersionConflict(current_version)
            draft = Draft(
                draft_id=current.draft_id if current else f"d-{self._next_seq('draft')}",
                pitch_id=pitch_id,
                title=title,
                body=body,
                version=current_version + 1,
                updated_at=self.clock.now(),
            )
            self._write_draft(draft)
            self._write_pitch(self._transition(pitch, "drafting"))
            return draft

    def get_draft(self, pitch_id: str) -> Draft:
        with self._lock:
            self.get_pitch(pitch_id)
            draft = self._load_draft(pitch_id)
        if draft is None:
            raise DraftNotFound(pitch_id)
        return draft

    def finalize_pitch(self, pitch_id: str) -> Pitch:
        with self._lock:
            pitch = self.get_pitch(pitch_id)
            if pitch.status != "drafting" or self._load_draft(pitch_id) is None:
                raise IllegalState(f"cannot finalize a pitch in status {pitch.status}")
            pitch = self._transition(pitch, "done")
            self._write_pitch(pitch)
            return pitch

    # ------------------------------------------------------------------
    # trend snapshots
    # ------------------------------------------------------------------

    def record_snapshot(self, snapshot: TrendSnapshot) -> None:
        """Persist a snapshot; cycle_seq must advance for its provider+region."""
        with self._lock:
            newest = self.current_snapshot(snapshot.provider_id, snapshot.region)
            if newest is not None and snapshot.cycle_seq <= newest.cycle_seq:
                raise StaleSnapshot(
                    f"cycle_seq {snapshot.cycle_seq} <= current {newest.cycle_seq} "
                    f"for {snapshot.provider_id}/{snapshot.region}"
                )
            try:
                self._write_snapshot(snapshot)
            except Exception as e:
                raise StorageFailure(f"snapshot write failed: {e}") from e

    def current_snapshot(
        self,
        provider_id: str | None = None,
        region: str | None = None,
    ) -> TrendSnapshot | None:
        with self._lock:
            candidates = [
                s
                for s in self._load_all_snapshots()
                if (provider_id is None or s.provider_id == provider_id)
                and (region is None or s.region == region)
            ]
        if not candidates:
            return None
        return max(candidates, key=lambda s: (s.fetched_at, s.cycle_seq))

    def current_cycle_seq(self) -> int:
        with self._lock:
            snapshots = self._load_all_snapshots()
        return max((s.cycle_seq for s in snapshots), default=0)

    def prune_snapshots(self, keep: int) -> int:
        """Keep only the ``keep`` most recent snapshots per provider+region."""
        if keep < 1:
            raise InvalidRetention("keep must be >= 1")
        with self._lock:
            groups: dict[tuple[str, str], list[TrendSnapshot]] = {}
            for s in self._load_all_snapshots():
                groups.setdefault((s.provider_id, s.region), []).append(s)
            doomed: list[str] = []
            for snaps in groups.values():
                snaps.sort(key=lambda s: -s.cycle_seq)
                doomed.extend(s.snapshot_id for s in snaps[keep:])
            if doomed:
                self._delete_snapshots(doomed)
            return len(doomed)

    def search_terms(self, query: str) -> list[TrendTerm]:
        """Terms across retained snapshots whose normalized form contains
        normalize_term(query); the newest observation wins per term."""
        needle = normalize_term(query)
        with self._lock:
            snapshots = self._load_all_snapshots()
        by_key: dict[str, TrendTerm] = {}
        for snapshot in sorted(snapshots, key=lambda s: (s.fetched_at, s.cycle_seq)):
            for term in snapshot.terms:
                if needle in term.normalized_term:
                    by_key[term.normalized_term] = term
        return [by_key[k] for k in sorted(by_key)]

    # ------------------------------------------------------------------
    # export
    # ------------------------------------------------------------------

    def export_state(self) -> dict:
        """Full store contents as one JSON-serializable document."""
        with self._lock:
            pitches = self._load_all_pitches()
            suggestions = []
            drafts = []
            for pitch in pitches:
                suggestions.extend(self._load_suggestions_for(pitch.pitch_id))
                draft = self._load_draft(pitch.pitch_id)
                if draft is not None:
                    drafts.append(draft)
            snapshots = self._load_all_snapshots()
        pitches.sort(key=lambda p: p.pitch_id)
        suggestions.sort(key=lambda s: s.suggestion_id)
        drafts.sort(key=lambda d: d.draft_id)
        snapshots.sort(key=lambda s: (s.provider_id, s.region, s.cycle_seq))
        return {
            "pitches": [p.to_dict() for p in pitches],
            "suggestion_sets": [s.to_dict() for s in suggestions],
            "drafts": [d.to_dict() for d in drafts],
            "snapshots": [s.to_dict() for s in snapshots],
        }
