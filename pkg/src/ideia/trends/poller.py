"""Fixed-interval poll loop: fetch -> merge -> persist.

One tick is one poll attempt. Successful ticks advance cycle_seq by exactly
one and atomically publish the merged snapshot; failed ticks leave the
previous snapshot current and append to the cycle log. Nothing a provider
does can break the loop.

The scheduler never sleeps on its own clock: real deployments drive it from
a thread with an interruptible wait, tests drive it tick by tick on a
simulated clock.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from datetime import datetime

from ..clock import Clock, to_rfc3339
from .models import TrendSnapshot
from .providers import ProviderFailure, TrendProvider, fetch_trends
from .ranking import merge_snapshot

logger = logging.getLogger("ideia.poll")


@dataclass(frozen=True)
class CycleEvent:
    tick: int  # 1-based attempt counter, failures included
    at: datetime
    ok: bool
    cycle_seq: int  # value after this tick
    term_count: int
    error: str | None = None


class SnapshotSink:
    """Where successful cycles land (the editorial store in production)."""

    def record_snapshot(self, snapshot: TrendSnapshot) -> None:
        raise NotImplementedError

    def current_snapshot(self, provider_id: str, region: str) -> TrendSnapshot | None:
        raise NotImplementedError


class PollScheduler:
    def __init__(
        self,
        provider: TrendProvider,
        region: str,
        store: SnapshotSink,
        clock: Clock,
        limit: int = 20,
        interval_seconds: int = 600,
    ):
        if interval_seconds < 1:
            raise ValueError("interval_seconds must be >= 1")
        self.provider = provider
        self.region = region
        self.store = store
        self.clock = clock
        self.limit = limit
        self.interval_seconds = interval_seconds
        self.cycle_log: list[CycleEvent] = []
        self._tick_count = 0
        # resume from the persisted snapshot so cycle_seq stays monotone
        # across restarts
        self.current = store.current_snapshot(provider.descriptor.provider_id, region)
        self.cycle_seq = self.current.cycle_seq if self.current else 0

    def tick(self) -> CycleEvent:
        """Run one poll attempt; never raises."""
        self._tick_count += 1
        now = self.clock.now()
        try:
            incoming = fetch_trends(
                self.provider,
                self.region,
                self.limit,
                self.clock,
                cycle_seq=self.cycle_seq + 1,
            )
            merged = merge_snapshot(self.current, incoming) if self.current else incoming
            self.store.record_snapshot(merged)
        except Exception as e:
            event = CycleEvent(
                tick=self._tick_count,
                at=now,
                ok=False,
                cycle_seq=self.cycle_seq,
                term_count=len(self.current.terms) if self.current else 0,
                error=f"{type(e).__name__}: {e}",
            )
            self.cycle_log.append(event)
            logger.warning(
                "poll tick=%d at=%s failed cycle_seq=%d error=%s",
                event.tick, to_rfc3339(now), event.cycle_seq, event.error,
            )
            return event

        self.current = merged
        self.cycle_seq = merged.cycle_seq
        event = CycleEvent(
            tick=self._tick_count,
            at=now,
            ok=True,
            cycle_seq=self.cycle_seq,
            term_count=len(merged.terms),
        )
        self.cycle_log.append(event)
        logger.info(
            "poll tick=%d at=%s ok cycle_seq=%d terms=%d",
            event.tick, to_rfc3339(now), event.cycle_seq, event.term_count,
        )
        return event

    def run(self, stop: threading.Event) -> None:
        """Real-time loop for serve mode; returns when ``stop`` is set."""
        while not stop.wait(self.interval_seconds):
            self.tick()


def run_simulated(scheduler: PollScheduler, clock, duration_seconds: int) -> list[CycleEvent]:
    """Drive the scheduler over ``duration_seconds`` of simulated time.

    Ticks happen each time a full interval elapses, so a one-hour run at the
    default 600 s interval is exactly six ticks.
    """
    events = []
    for _ in range(duration_seconds // scheduler.interval_seconds):
        clock.advance(scheduler.interval_seconds)
        events.append(scheduler.tick())
    return events
