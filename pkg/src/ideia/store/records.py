"""Persisted editorial records: pitches and versioned drafts."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from ..clock import parse_rfc3339, to_rfc3339
from ..suggest.models import IdeationContext

PITCH_STATUSES = ("ideation", "suggested", "drafting", "done")
PITCH_ORIGINS = ("trend", "search", "manual")

# status -> statuses reachable in one step; self-loops cover re-generation
# (suggested) and repeated saves (drafting)
STATUS_TRANSITIONS: dict[str, frozenset[str]] = {
    "ideation": frozenset({"suggested"}),
    "suggested": frozenset({"suggested", "drafting"}),
    "drafting": frozenset({"drafting", "done"}),
    "done": frozenset(),
}


@dataclass(frozen=True)
class Pitch:
    pitch_id: str
    origin: str
    context: IdeationContext
    status: str
    created_at: datetime
    updated_at: datetime
    trend_ref: str | None = None

    def to_dict(self) -> dict:
        return {
            "pitch_id": self.pitch_id,
            "origin": self.origin,
            "trend_ref": self.trend_ref,
            "context": self.context.to_dict(),
            "status": self.status,
            "created_at": to_rfc3339(self.created_at),
            "updated_at": to_rfc3339(self.updated_at),
        }

    @staticmethod
    def from_dict(data: dict) -> "Pitch":
        return Pitch(
            pitch_id=data["pitch_id"],
            origin=data["origin"],
            trend_ref=data.get("trend_ref"),
            context=IdeationContext.from_dict(data["context"]),
            status=data["status"],
            created_at=parse_rfc3339(data["created_at"]),
            updated_at=parse_rfc3339(data["updated_at"]),
        )


@dataclass(frozen=True)
class Draft:
    """Current draft of a pitch; version increments by one per save."""

    draft_id: str
    pitch_id: str
    title: str
    body: str
    version: int
    updated_at: datetime

    def to_dict(self) -> dict:
        return {
            "draft_id": self.draft_id,
            "pitch_id": self.pitch_id,
            "title": self.title,
            "body": self.body,
            "version": self.version,
            "updated_at": to_rfc3339(self.updated_at),
        }

    @staticmethod
    def from_dict(data: dict) -> "Draft":
        return Draft(
            draft_id=data["draft_id"],
            pitch_id=data["pitch_id"],
            title=data["title"],
            body=data["body"],
            version=data["version"],
            updated_at=parse_rfc3339(data["updated_at"]),
        )
