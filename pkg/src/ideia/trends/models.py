"""Domain types for trend ingestion."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from ..clock import parse_rfc3339, to_rfc3339
from .normalize import normalize_term


@dataclass(frozen=True)
class TrendTerm:
    """One trending search term as captured by a poll.

    ``normalized_term`` is always ``normalize_term(raw_term)``; construct via
    :func:`make_term` unless you already hold a normalized pair.
    """

    raw_term: str
    normalized_term: str
    search_volume: int
    region: str
    captured_at: datetime
    source: str
    related_queries: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.search_volume < 0:
            raise ValueError("search_volume must be >= 0")
        if self.normalized_term != normalize_term(self.raw_term):
            raise ValueError("normalized_term does not match raw_term")

    def to_dict(self) -> dict:
        return {
            "term": self.raw_term,
            "normalized_term": self.normalized_term,
            "volume": self.search_volume,
            "region": self.region,
            "captured_at": to_rfc3339(self.captured_at),
            "source": self.source,
            "related": list(self.related_queries),
        }

    @staticmethod
    def from_dict(data: dict) -> "TrendTerm":
        return TrendTerm(
            raw_term=data["term"],
            normalized_term=data["normalized_term"],
            search_volume=data["volume"],
            region=data["region"],
            captured_at=parse_rfc3339(data["captured_at"]),
            source=data["source"],
            related_queries=tuple(data.get("related", ())),
        )


def make_term(
    raw_term: str,
    search_volume: int,
    region: str,
    captured_at: datetime,
    source: str,
    related_queries: tuple[str, ...] = (),
) -> TrendTerm:
    return TrendTerm(
        raw_term=raw_term,
        normalized_term=normalize_term(raw_term),
        search_volume=search_volume,
        region=region,
        captured_at=captured_at,
        source=source,
        related_queries=related_queries,
    )


@dataclass(frozen=True)
class TrendSnapshot:
    """The complete result of one poll cycle for a provider+region.

    Terms never share a normalized_term within one snapshot; term order is
    normalized_term-ascending so serialized snapshots are byte-stable.
    """

    snapshot_id: str
    provider_id: str
    region: str
    fetched_at: datetime
    cycle_seq: int
    terms: tuple[TrendTerm, ...]

    def __post_init__(self) -> None:
        keys = [t.normalized_term for t in self.terms]
        if len(keys) != len(set(keys)):
            raise ValueError("snapshot terms share a normalized_term")

    def to_dict(self) -> dict:
        return {
            "snapshot_id": self.snapshot_id,
            "provider_id": self.provider_id,
            "region": self.region,
            "fetched_at": to_rfc3339(self.fetched_at),
            "cycle_seq": self.cycle_seq,
            "terms": [t.to_dict() for t in self.terms],
        }

    @staticmethod
    def from_dict(data: dict) -> "TrendSnapshot":
        return TrendSnapshot(
            snapshot_id=data["snapshot_id"],
            provider_id=data["provider_id"],
            region=data["region"],
            fetched_at=parse_rfc3339(data["fetched_at"]),
            cycle_seq=data["cycle_seq"],
            terms=tuple(TrendTerm.from_dict(t) for t in data["terms"]),
        )


def snapshot_id_for(provider_id: str, region: str, cycle_seq: int) -> str:
    # deterministic id: replays of the same cycle produce the same snapshot
    return f"{provider_id}:{region}:{cycle_seq}"


@dataclass(frozen=True)
class RankingConfig:
    """Knobs for recency-decayed ranking.

    half_life_minutes: staleness at which a term's weight halves.
    volume_floor: terms below this volume are dropped before ranking.
    """

    half_life_minutes: float = 120.0
    volume_floor: int = 0

    def __post_init__(self) -> None:
        if self.half_life_minutes <= 0:
            raise ValueError("half_life_minutes must be > 0")
        if self.volume_floor < 0:
            raise ValueError("volume_floor must be >= 0")
