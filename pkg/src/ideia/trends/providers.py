"""Trend providers: the fetch abstraction, the JSONL replay provider, and a
minimal live HTTP client.

The replay provider is the workhorse: it feeds committed fixtures through the
exact same ingestion path the live client uses, so the whole pipeline is
testable offline. Fixture format (one JSON object per line):

    {"term": "carnaval recife", "volume": "20K+", "region": "BR", "related": []}

Blank lines are ignored; a line equal to "---" marks a page boundary. Each
fetch consumes one page, looping when the pages are exhausted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..clock import Clock
from .models import TrendSnapshot, TrendTerm, make_term, snapshot_id_for
from .normalize import EmptyTerm, MalformedVolume, normalize_term, parse_volume


class UnsupportedRegion(ValueError):
    """Requested region is not in the provider's descriptor."""


class ProviderFailure(RuntimeError):
    """Transport or format error from a trend provider."""


class FixtureNotFound(ProviderFailure):
    pass


class FixtureParse(ProviderFailure):
    """First malformed fixture line; carries its 1-based line number."""

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"fixture line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


@dataclass(frozen=True)
class ProviderDescriptor:
    provider_id: str
    supports_regions: tuple[str, ...]
    kind: str  # "live" | "replay"


@dataclass(frozen=True)
class RawTrendRecord:
    """One fixture/feed record after validation, volume already parsed."""

    term: str
    volume: int
    region: str
    related: tuple[str, ...] = ()


class TrendProvider:
    """Source of raw trend records.

    ``fetch_page`` returns the provider's natural unit of records for one poll;
    ``limit`` is an upstream hint only — truncation to the highest-volume
    ``limit`` terms happens in :func:`fetch_trends`, where volumes are known.
    """

    descriptor: ProviderDescriptor

    def fetch_page(self, region: str, limit: int) -> list[RawTrendRecord]:
        raise NotImplementedError


def _parse_record(line: str, line_number: int) -> RawTrendRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise FixtureParse(line_number, f"invalid JSON: {e.msg}") from e
    if not isinstance(obj, dict):
        raise FixtureParse(line_number, "record is not a JSON object")
    term = obj.get("term")
    volume = obj.get("volume")
    region = obj.get("region")
    related = obj.get("related", [])
    if not isinstance(term, str) or not term.strip():
        raise FixtureParse(line_number, "missing or empty 'term'")
    if not isinstance(volume, str):
        raise FixtureParse(line_number, "'volume' must be a string")
    if not isinstance(region, str) or not region:
        raise FixtureParse(line_number, "missing 'region'")
    if not isinstance(related, list) or not all(isinstance(q, str) for q in related):
        raise FixtureParse(line_number, "'related' must be a list of strings")
    try:
        parsed_volume = parse_volume(volume)
    except MalformedVolume as e:
        raise FixtureParse(line_number, str(e)) from e
    return RawTrendRecord(term=term, volume=parsed_volume, region=region, related=tuple(related))


class ReplayTrendProvider(TrendProvider):
    """Replays fixture pages in file order, looping when exhausted."""

    def __init__(self, pages: list[list[RawTrendRecord]], descriptor: ProviderDescriptor):
        self.descriptor = descriptor
        self._pages = pages if pages else [[]]
        self._next = 0

    @property
    def page_count(self) -> int:
        return len(self._pages)

    def fetch_page(self, region: str, limit: int) -> list[RawTrendRecord]:
        page = self._pages[self._next % len(self._pages)]
        self._next += 1
        return list(page)


def load_replay_fixture(path: str | Path, provider_id: str = "replay") -> ReplayTrendProvider:
    """Parse a JSONL trend fixture into a replay provider.

    The whole file is validated eagerly so a malformed line fails at load time
    with its line number, not mid-run. Supported regions are the regions that
    appear in the file ("BR" when the file is empty, so an empty fixture still
    yields empty snapshots instead of region errors).
    """
    p = Path(path)
    if not p.is_file():
        raise FixtureNotFound(f"fixture not found: {p}")
    pages: list[list[RawTrendRecord]] = [[]]
    regions: set[str] = set()
    with p.open(encoding="utf-8") as fh:
        for line_number, raw_line in enumerate(fh, start=1):
            line = raw_line.strip()
            if not line:
                continue
            if line == "---":
                pages.append([])
                continue
            record = _parse_record(line, line_number)
            regions.add(record.region)
            pages[-1].append(record)
    if not regions:
        regions = {"BR"}
    descriptor = ProviderDescriptor(
        provider_id=provider_id,
        supports_regions=tuple(sorted(regions)),
        kind="replay",
    )
    return ReplayTrendProvider(pages, descriptor)


class LiveTrendsClient(TrendProvider):
    """HTTP client for a live trends feed.

    Expects an endpoint returning a JSON array of records in the fixture
    shape. Exercised only through the shared abstraction; tests run on the
    replay provider.
    """

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        provider_id: str = "live-trends",
        supports_regions: tuple[str, ...] = ("BR",),
        timeout_seconds: float = 15.0,
    ):
        self.descriptor = ProviderDescriptor(
            provider_id=provider_id,
            supports_regions=supports_regions,
            kind="live",
        )
        self._base_url = base_url
        self._api_key = api_key
        self._timeout = timeout_seconds

    def fetch_page(self, region: str, limit: int) -> list[RawTrendRecord]:
        import httpx

        headers = {}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        try:
            resp = httpx.get(
                self._base_url,
                params={"region": region, "limit": limit},
                headers=headers,
                timeout=self._timeout,
            )
            resp.raise_for_status()
            payload = resp.json()
        except Exception as e:
            raise ProviderFailure(f"live trends fetch failed: {e}") from e
        if not isinstance(payload, list):
            raise ProviderFailure("live trends response is not a JSON array")
        records = []
        for i, obj in enumerate(payload, start=1):
            records.append(_parse_record(json.dumps(obj), i))
        return records


def fetch_trends(
    provider: TrendProvider,
    region: str,
    limit: int,
    clock: Clock,
    cycle_seq: int = 1,
) -> TrendSnapshot:
    """One poll: fetch raw records, normalize, dedup, truncate, stamp.

    Duplicate normalized terms keep the larger volume. When more than
    ``limit`` distinct terms arrive, the highest-volume ``limit`` survive
    (ties broken by normalized_term so truncation is deterministic).
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if region not in provider.descriptor.supports_regions:
        raise UnsupportedRegion(
            f"region {region!r} not supported by {provider.descriptor.provider_id}"
        )
    try:
        records = provider.fetch_page(region, limit)
    except ProviderFailure:
        raise
    except Exception as e:
        raise ProviderFailure(f"provider fetch failed: {e}") from e

    captured_at = clock.now()
    by_key: dict[str, TrendTerm] = {}
    for record in records:
        try:
            term = make_term(
                raw_term=record.term,
                search_volume=record.volume,
                region=region,
                captured_at=captured_at,
                source=provider.descriptor.provider_id,
                related_queries=record.related,
            )
        except EmptyTerm as e:
            raise ProviderFailure(f"provider returned an empty term: {e}") from e
        existing = by_key.get(term.normalized_term)
        if existing is None or term.search_volume > existing.search_volume:
            by_key[term.normalized_term] = term

    kept = sorted(by_key.values(), key=lambda t: (-t.search_volume, t.normalized_term))[:limit]
    kept.sort(key=lambda t: t.normalized_term)
    return TrendSnapshot(
        snapshot_id=snapshot_id_for(provider.descriptor.provider_id, region, cycle_seq),
        provider_id=provider.descriptor.provider_id,
        region=region,
        fetched_at=captured_at,
        cycle_seq=cycle_seq,
        terms=tuple(kept),
    )
