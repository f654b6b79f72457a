from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from ideia.api.app import ApiConfig, create_app
from ideia.clock import SimulatedClock
from ideia.config import bundled_fixture_path
from ideia.store.memory import MemoryStore
from ideia.store.sqlite import SqliteStore
from ideia.suggest.engine import SuggestionEngine
from ideia.suggest.providers import StubGenerativeProvider
from ideia.trends.models import RankingConfig
from ideia.trends.poller import PollScheduler
from ideia.trends.providers import load_replay_fixture

TEST_TOKEN = "test-token"
AUTH = {"Authorization": f"Bearer {TEST_TOKEN}"}


@pytest.fixture
def clock() -> SimulatedClock:
    return SimulatedClock()


@pytest.fixture(params=["memory", "sqlite"])
def store(request, clock, tmp_path):
    """Both store backends behind the same contract."""
    if request.param == "memory":
        s = MemoryStore(clock)
    else:
        s = SqliteStore(tmp_path / "store.sqlite3", clock)
    yield s
    s.close()


@pytest.fixture
def mem_store(clock) -> MemoryStore:
    return MemoryStore(clock)


@pytest.fixture
def replay_provider():
    return load_replay_fixture(bundled_fixture_path())


def make_app(store, clock, provider=None, engine=None, **engine_kwargs):
    """App wired for tests: stub provider, no real sleeping."""
    if engine is None:
        engine_kwargs.setdefault("sleep", lambda seconds: None)
        engine = SuggestionEngine(store, provider or StubGenerativeProvider(),
                                  clock=clock, **engine_kwargs)
    app = create_app(
        store,
        engine,
        ApiConfig(auth_token=TEST_TOKEN),
        clock=clock,
        ranking=RankingConfig(),
    )
    return app


@pytest.fixture
def client(mem_store, clock):
    return TestClient(make_app(mem_store, clock))


@pytest.fixture
def seeded_client(mem_store, clock, replay_provider):
    """Client over a store holding one poll cycle of the bundled fixture."""
    scheduler = PollScheduler(replay_provider, "BR", mem_store, clock, limit=20)
    clock.advance(600)
    event = scheduler.tick()
    assert event.ok
    return TestClient(make_app(mem_store, clock))


def assert_problem(response, code: str | None = None):
    """Every non-success body must parse as a problem detail."""
    body = response.json()
    assert isinstance(body, dict), body
    assert isinstance(body.get("code"), str) and body["code"], body
    assert isinstance(body.get("message"), str), body
    if code is not None:
        assert body["code"] == code, body
    return body


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    verdict = "PASS" if report.passed else "FAIL"
    print(f"\nACCEPTANCE {verdict}: {name}", flush=True)
