"""Durable editorial persistence: pitches, suggestion sets, versioned drafts,
and trend snapshots, behind one store interface with in-memory and SQLite
backends."""

from .base import (
    DraftNotFound,
    EditorialStore,
    IllegalState,
    InvalidPage,
    InvalidRetention,
    MissingTrendRef,
    PitchNotFound,
    StaleSnapshot,
    StorageFailure,
    SuggestionNotFound,
    VersionConflict,
)
from .memory import MemoryStore
from .records import PITCH_ORIGINS, PITCH_STATUSES, STATUS_TRANSITIONS, Draft, Pitch
from .sqlite import SqliteStore

__all__ = [
    "Draft",
    "DraftNotFound",
    "EditorialStore",
    "IllegalState",
    "InvalidPage",
    "InvalidRetention",
    "MemoryStore",
    "MissingTrendRef",
    "PITCH_ORIGINS",
    "PITCH_STATUSES",
    "Pitch",
    "PitchNotFound",
    "SqliteStore",
    "StaleSnapshot",
    "STATUS_TRANSITIONS",
    "StorageFailure",
    "SuggestionNotFound",
    "VersionConflict",
]
