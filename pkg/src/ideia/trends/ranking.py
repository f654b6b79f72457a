"""Snapshot merging and recency-decayed ranking.

The rank of a term is log10(1 + volume) scaled by an exponential half-life
decay on its age:

    score = log10(1 + search_volume) * 2 ** (-age_minutes / half_life_minutes)

Log-volume keeps a 1M-search spike from drowning everything else; the
half-life gives one interpretable staleness knob. Ordering is total and
deterministic: score descending, then normalized_term ascending.
"""

from __future__ import annotations

import math
from datetime import datetime

from .models import RankingConfig, TrendSnapshot, TrendTerm, snapshot_id_for


class ProviderMismatch(ValueError):
    """Merging snapshots from different providers or regions."""


class FutureTimestamp(ValueError):
    """A term claims to have been captured after 'now'."""


def term_score(term: TrendTerm, now: datetime, cfg: RankingConfig) -> float:
    age_minutes = (now - term.captured_at).total_seconds() / 60.0
    decay = 2.0 ** (-age_minutes / cfg.half_life_minutes)
    return math.log10(1 + term.search_volume) * decay


def rank_trends(
    terms: list[TrendTerm] | tuple[TrendTerm, ...],
    now: datetime,
    cfg: RankingConfig,
) -> list[tuple[TrendTerm, float]]:
    """Score and order terms; excludes terms below the volume floor."""
    for t in terms:
        if t.captured_at > now:
            raise FutureTimestamp(
                f"{t.normalized_term!r} captured_at {t.captured_at} is after {now}"
            )
    scored = [
        (t, term_score(t, now, cfg))
        for t in terms
        if t.search_volume >= cfg.volume_floor
    ]
    scored.sort(key=lambda pair: (-pair[1], pair[0].normalized_term))
    return scored


def merge_snapshot(current: TrendSnapshot, incoming: TrendSnapshot) -> TrendSnapshot:
    """Fold a new poll into the running snapshot.

    Keyed by normalized_term: a term seen in both takes the incoming
    observation (newest volume estimate wins); terms only in ``current`` are
    retained; terms only in ``incoming`` are added. The result carries the
    incoming cycle_seq and fetched_at.
    """
    if (current.provider_id, current.region) != (incoming.provider_id, incoming.region):
        raise ProviderMismatch(
            f"cannot merge {current.provider_id}/{current.region} "
            f"with {incoming.provider_id}/{incoming.region}"
        )
    by_key = {t.normalized_term: t for t in current.terms}
    for term in incoming.terms:
        existing = by_key.get(term.normalized_term)
        # duplicate keys inside one incoming snapshot cannot happen (type
        # invariant), but an incoming term always replaces the current one
        if existing is None or existing.captured_at <= term.captured_at:
            by_key[term.normalized_term] = term
    merged = tuple(sorted(by_key.values(), key=lambda t: t.normalized_term))
    return TrendSnapshot(
        snapshot_id=snapshot_id_for(incoming.provider_id, incoming.region, incoming.cycle_seq),
        provider_id=incoming.provider_id,
        region=incoming.region,
        fetched_at=incoming.fetched_at,
        cycle_seq=incoming.cycle_seq,
        terms=merged,
    )
