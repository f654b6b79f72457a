"""Ideation context and suggestion-set types, with context validation."""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime

from ..clock import parse_rfc3339, to_rfc3339

TONES = ("neutral", "formal", "casual", "urgent")

MAX_KEYWORDS = 10
MAX_NOTES_CHARS = 2000
MAX_TITLES = 10
MAX_TITLE_CHARS = 120
MAX_SUMMARY_CHARS = 1200
MAX_FEEDBACK_CHARS = 1000


class InvalidContext(ValueError):
    def __init__(self, fieldname: str, reason: str):
        super().__init__(f"{fieldname}: {reason}")
        self.field = fieldname
        self.reason = reason


@dataclass(frozen=True)
class IdeationContext:
    """Editor-supplied context feeding prompt construction."""

    topic: str
    keywords: tuple[str, ...] = ()
    editorial_section: str = ""
    tone: str = "neutral"
    audience: str | None = None
    language: str = "pt-BR"
    extra_notes: str | None = None

    def to_dict(self) -> dict:
        return {
            "topic": self.topic,
            "keywords": list(self.keywords),
            "editorial_section": self.editorial_section,
            "tone": self.tone,
            "audience": self.audience,
            "language": self.language,
            "extra_notes": self.extra_notes,
        }

    @staticmethod
    def from_dict(data: dict) -> "IdeationContext":
        return IdeationContext(
            topic=data.get("topic", ""),
            keywords=tuple(data.get("keywords") or ()),
            editorial_section=data.get("editorial_section", "") or "",
            tone=data.get("tone") or "neutral",
            audience=data.get("audience"),
            language=data.get("language") or "pt-BR",
            extra_notes=data.get("extra_notes"),
        )


def _single_line(fieldname: str, value: str) -> str:
    value = value.strip()
    if "\n" in value or "\r" in value:
        raise InvalidContext(fieldname, "must be a single line")
    return value


def validate_context(ctx: IdeationContext) -> IdeationContext:
    """Trim, apply defaults, and enforce limits; raises InvalidContext."""
    topic = _single_line("topic", ctx.topic)
    if not topic:
        raise InvalidContext("topic", "must not be empty")

    keywords = tuple(_single_line("keywords", k) for k in ctx.keywords)
    keywords = tuple(k for k in keywords if k)
    if len(keywords) > MAX_KEYWORDS:
        raise InvalidContext("keywords", f"at most {MAX_KEYWORDS} keywords")

    tone = (ctx.tone or "neutral").strip().lower()
    if tone not in TONES:
        raise InvalidContext("tone", f"must be one of {', '.join(TONES)}")

    section = _single_line("editorial_section", ctx.editorial_section or "")

    audience = None
    if ctx.audience is not None:
        audience = _single_line("audience", ctx.audience) or None

    language = (ctx.language or "pt-BR").strip() or "pt-BR"
    if "\n" in language:
        raise InvalidContext("language", "must be a single line")

    notes = None
    if ctx.extra_notes is not None:
        notes = ctx.extra_notes.strip() or None
        if notes and len(notes) > MAX_NOTES_CHARS:
            raise InvalidContext("extra_notes", f"at most {MAX_NOTES_CHARS} characters")

    return replace(
        ctx,
        topic=topic,
        keywords=keywords,
        editorial_section=section,
        tone=tone,
        audience=audience,
        language=language,
        extra_notes=notes,
    )


@dataclass(frozen=True)
class SuggestionSet:
    """One generation result: titles plus a summary, with provenance.

    ``n_titles`` (the count requested) and ``feedback`` (for refinements) are
    persisted so any prompt in a refinement chain can be reconstructed without
    storing raw request bodies.
    """

    suggestion_id: str
    pitch_id: str
    titles: tuple[str, ...]
    summary: str
    provider_id: str
    prompt_fingerprint: str
    created_at: datetime
    n_titles: int
    parent_id: str | None = None
    feedback: str | None = None
    truncated: bool = False

    def to_dict(self) -> dict:
        return {
            "suggestion_id": self.suggestion_id,
            "pitch_id": self.pitch_id,
            "titles": list(self.titles),
            "summary": self.summary,
            "provider_id": self.provider_id,
            "prompt_fingerprint": self.prompt_fingerprint,
            "created_at": to_rfc3339(self.created_at),
            "n_titles": self.n_titles,
            "parent_id": self.parent_id,
            "feedback": self.feedback,
            "truncated": self.truncated,
        }

    @staticmethod
    def from_dict(data: dict) -> "SuggestionSet":
        return SuggestionSet(
            suggestion_id=data["suggestion_id"],
            pitch_id=data["pitch_id"],
            titles=tuple(data["titles"]),
            summary=data["summary"],
            provider_id=data["provider_id"],
            prompt_fingerprint=data["prompt_fingerprint"],
            created_at=parse_rfc3339(data["created_at"]),
            n_titles=data["n_titles"],
            parent_id=data.get("parent_id"),
            feedback=data.get("feedback"),
            truncated=bool(data.get("truncated", False)),
        )


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    base_backoff_ms: int = 250  # doubles per attempt

    def __post_init__(self) -> None:
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.base_backoff_ms < 1:
            raise ValueError("base_backoff_ms must be >= 1")

    def backoff_seconds(self, failed_attempts: int) -> float:
        return (self.base_backoff_ms * (2 ** (failed_attempts - 1))) / 1000.0
