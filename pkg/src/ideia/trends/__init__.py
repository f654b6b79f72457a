"""Trend ingestion: pluggable providers, normalization, merging, ranking,
and the fixed-interval poll scheduler."""

from .models import RankingConfig, TrendSnapshot, TrendTerm, make_term
from .normalize import EmptyTerm, MalformedVolume, normalize_term, parse_volume
from .poller import CycleEvent, PollScheduler, run_simulated
from .providers import (
    FixtureNotFound,
    FixtureParse,
    LiveTrendsClient,
    ProviderDescriptor,
    ProviderFailure,
    RawTrendRecord,
    ReplayTrendProvider,
    TrendProvider,
    UnsupportedRegion,
    fetch_trends,
    load_replay_fixture,
)
from .ranking import FutureTimestamp, ProviderMismatch, merge_snapshot, rank_trends, term_score

__all__ = [
    "CycleEvent",
    "EmptyTerm",
    "FixtureNotFound",
    "FixtureParse",
    "FutureTimestamp",
    "LiveTrendsClient",
    "MalformedVolume",
    "PollScheduler",
    "ProviderDescriptor",
    "ProviderFailure",
    "ProviderMismatch",
    "RankingConfig",
    "RawTrendRecord",
    "ReplayTrendProvider",
    "TrendProvider",
    "TrendSnapshot",
    "TrendTerm",
    "UnsupportedRegion",
    "fetch_trends",
    "load_replay_fixture",
    "make_term",
    "merge_snapshot",
    "normalize_term",
    "parse_volume",
    "rank_trends",
    "run_simulated",
    "term_score",
]
