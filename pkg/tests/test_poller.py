from __future__ import annotations

import pytest

from ideia.clock import SimulatedClock
from ideia.store.memory import MemoryStore
from ideia.trends.poller import PollScheduler, run_simulated
from ideia.trends.providers import ProviderDescriptor, ProviderFailure, RawTrendRecord, TrendProvider


class ScriptedProvider(TrendProvider):
    """Returns one term per call, named after the call number; raises on the
    call numbers in ``fail_on``."""

    def __init__(self, fail_on: set[int] = frozenset()):
        self.descriptor = ProviderDescriptor("scripted", ("BR",), "replay")
        self.calls = 0
        self.fail_on = set(fail_on)

    def fetch_page(self, region: str, limit: int) -> list[RawTrendRecord]:
        self.calls += 1
        if self.calls in self.fail_on:
            raise ProviderFailure(f"scripted failure on call {self.calls}")
        return [RawTrendRecord(term=f"term-c{self.calls}", volume=100 * self.calls, region="BR")]


@pytest.fixture
def clock():
    return SimulatedClock()


@pytest.fixture
def store(clock):
    return MemoryStore(clock)


def test_interval_must_be_positive(clock, store):
    with pytest.raises(ValueError):
        PollScheduler(ScriptedProvider(), "BR", store, clock, interval_seconds=0)


def test_simulated_hour_at_default_interval_is_six_cycles(clock, store):
    scheduler = PollScheduler(ScriptedProvider(), "BR", store, clock, interval_seconds=600)
    events = run_simulated(scheduler, clock, 3600)
    assert len(events) == 6
    assert scheduler.cycle_seq == 6
    assert store.current_cycle_seq() == 6


def test_failures_are_contained_and_logged(clock, store):
    provider = ScriptedProvider(fail_on={3, 5})
    scheduler = PollScheduler(provider, "BR", store, clock, interval_seconds=600)
    run_simulated(scheduler, clock, 3600)

    assert scheduler.cycle_seq == 4
    assert [e.ok for e in scheduler.cycle_log] == [True, True, False, True, False, True]
    failed = [e for e in scheduler.cycle_log if not e.ok]
    assert all(e.error for e in failed)

    current = store.current_snapshot("scripted", "BR")
    assert current is not None
    assert current.cycle_seq == 4
    assert {t.normalized_term for t in current.terms} == {
        "term-c1", "term-c2", "term-c4", "term-c6",
    }


def test_failure_keeps_previous_snapshot_current(clock, store):
    provider = ScriptedProvider(fail_on={2})
    scheduler = PollScheduler(provider, "BR", store, clock, interval_seconds=60)
    run_simulated(scheduler, clock, 60)
    before = store.current_snapshot("scripted", "BR")
    run_simulated(scheduler, clock, 60)  # this tick fails
    after = store.current_snapshot("scripted", "BR")
    assert after == before
    assert scheduler.cycle_seq == 1


def test_five_cycles_one_failure_merges_the_other_four(clock, store):
    provider = ScriptedProvider(fail_on={3})
    scheduler = PollScheduler(provider, "BR", store, clock, interval_seconds=600)
    run_simulated(scheduler, clock, 3000)
    assert scheduler.cycle_seq == 4
    current = store.current_snapshot("scripted", "BR")
    assert {t.normalized_term for t in current.terms} == {
        "term-c1", "term-c2", "term-c4", "term-c5",
    }


def test_scheduler_resumes_cycle_seq_from_store(clock, store):
    scheduler = PollScheduler(ScriptedProvider(), "BR", store, clock, interval_seconds=600)
    run_simulated(scheduler, clock, 1800)
    assert scheduler.cycle_seq == 3

    # a new scheduler over the same store picks up where the old one stopped
    resumed = PollScheduler(ScriptedProvider(), "BR", store, clock, interval_seconds=600)
    assert resumed.cycle_seq == 3
    run_simulated(resumed, clock, 600)
    assert store.current_cycle_seq() == 4


def test_storage_failures_do_not_escape(clock, store):
    class BrokenStore(MemoryStore):
        def record_snapshot(self, snapshot):
            raise OSError("disk full")

    broken = BrokenStore(clock)
    scheduler = PollScheduler(ScriptedProvider(), "BR", broken, clock, interval_seconds=60)
    event = run_simulated(scheduler, clock, 60)[0]
    assert not event.ok
    assert scheduler.cycle_seq == 0
