"""Acceptance gate: one test per release criterion.

Each test is self-contained and pinned to its stated tolerance; the conftest
hook prints one ACCEPTANCE PASS/FAIL line per criterion.
"""

from __future__ import annotations

import json
import random
import re
import threading
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from ideia.clock import SimulatedClock
from ideia.config import bundled_fixture_path
from ideia.store.base import IllegalState, VersionConflict
from ideia.store.memory import MemoryStore
from ideia.store.sqlite import SqliteStore
from ideia.suggest.engine import SuggestionEngine
from ideia.suggest.hashing import fingerprint
from ideia.suggest.models import IdeationContext, RetryPolicy, SuggestionSet, validate_context
from ideia.suggest.parse import MalformedGeneration, parse_generation
from ideia.suggest.prompt import build_prompt
from ideia.suggest.providers import (
    GenerationError,
    GenerativeDescriptor,
    GenerativeProvider,
    stub_generate,
)
from ideia.trends.models import RankingConfig, make_term
from ideia.trends.poller import PollScheduler, run_simulated
from ideia.trends.providers import load_replay_fixture
from ideia.trends.ranking import rank_trends, term_score

from .conftest import AUTH, TEST_TOKEN, assert_problem, make_app
from .oracles import StatusOracle, brute_force_rank, fnv1a_64_reference
from .test_poller import ScriptedProvider

FIXTURE_PATH = Path(bundled_fixture_path())
MALFORMED_DIR = Path(__file__).parent / "fixtures" / "malformed_generations"


# ----------------------------------------------------------------------
# Criterion: offline end-to-end determinism
# ----------------------------------------------------------------------

FEEDBACK = "Títulos mais curtos e diretos."


def run_offline_transcript() -> str:
    """fetch-once -> pitch from top trend -> 3 titles -> refine -> draft -> done."""
    clock = SimulatedClock()
    store = MemoryStore(clock)
    provider = load_replay_fixture(FIXTURE_PATH)
    scheduler = PollScheduler(provider, "BR", store, clock, limit=20, interval_seconds=600)
    client = TestClient(make_app(store, clock))
    transcript: list[dict] = []

    def record(step: str, response) -> dict:
        transcript.append({"step": step, "status": response.status_code, "body": response.json()})
        return response.json()

    clock.advance(600)
    scheduler.tick()  # the fetch-once
    trends = record("fetch-once", client.get("/api/trends", headers=AUTH))
    top = trends["items"][0]

    clock.advance(1)
    pitch = record(
        "create-pitch",
        client.post(
            "/api/pitches",
            json={
                "context": {"topic": top["term"], "keywords": ["recife"]},
                "origin": "trend",
                "trend_ref": top["normalized_term"],
            },
            headers=AUTH,
        ),
    )
    pitch_id = pitch["pitch_id"]

    clock.advance(1)
    generated = record(
        "generate",
        client.post(f"/api/pitches/{pitch_id}/suggestions", json={"n_titles": 3}, headers=AUTH),
    )

    clock.advance(1)
    refined = record(
        "refine",
        client.post(
            f"/api/pitches/{pitch_id}/suggestions",
            json={"refine_of": generated["suggestion_id"], "feedback": FEEDBACK},
            headers=AUTH,
        ),
    )

    clock.advance(1)
    record(
        "save-draft",
        client.put(
            f"/api/pitches/{pitch_id}/draft",
            json={
                "title": refined["titles"][0],
                "body": refined["summary"],
                "expected_version": 0,
            },
            headers=AUTH,
        ),
    )

    clock.advance(1)
    record(
        "finalize",
        client.put(f"/api/pitches/{pitch_id}/draft", json={"finalize": True}, headers=AUTH),
    )
    return json.dumps(transcript, ensure_ascii=False, indent=2)


def test_offline_end_to_end_determinism():
    started = time.monotonic()
    first = run_offline_transcript()
    second = run_offline_transcript()
    elapsed = time.monotonic() - started

    assert first == second, "transcripts differ between runs"
    assert elapsed < 5.0, f"took {elapsed:.2f}s, budget is 5s"

    transcript = json.loads(first)
    assert [entry["step"] for entry in transcript] == [
        "fetch-once", "create-pitch", "generate", "refine", "save-draft", "finalize",
    ]
    assert [entry["status"] for entry in transcript] == [200, 201, 201, 201, 200, 200]
    assert len(transcript[0]["body"]["items"]) == 20
    assert len(transcript[2]["body"]["titles"]) == 3
    assert transcript[3]["body"]["parent_id"] == transcript[2]["body"]["suggestion_id"]
    assert transcript[4]["body"]["version"] == 1
    assert transcript[5]["body"]["pitch_status"] == "done"


# ----------------------------------------------------------------------
# Criterion: poll schedule
# ----------------------------------------------------------------------

def test_poll_schedule():
    # one simulated hour at the default 600 s interval: exactly six cycles
    clock = SimulatedClock()
    store = MemoryStore(clock)
    scheduler = PollScheduler(ScriptedProvider(), "BR", store, clock, interval_seconds=600)
    run_simulated(scheduler, clock, 3600)
    assert scheduler.cycle_seq == 6

    # failures injected on cycles 3 and 5: four successes, snapshot merges 1,2,4,6
    clock = SimulatedClock()
    store = MemoryStore(clock)
    scheduler = PollScheduler(
        ScriptedProvider(fail_on={3, 5}), "BR", store, clock, interval_seconds=600
    )
    run_simulated(scheduler, clock, 3600)
    assert scheduler.cycle_seq == 4
    current = store.current_snapshot("scripted", "BR")
    assert current is not None and current.cycle_seq == 4
    assert {t.normalized_term for t in current.terms} == {
        "term-c1", "term-c2", "term-c4", "term-c6",
    }


# ----------------------------------------------------------------------
# Criterion: ranking oracle
# ----------------------------------------------------------------------

def test_ranking_oracle():
    now = SimulatedClock().now()
    cfg = RankingConfig(half_life_minutes=120)

    # worked value, computed independently with 40-digit arithmetic:
    # log10(20001) * 2^(-120/120) = 2.150525854922613...
    from datetime import timedelta

    worked = make_term("w", 20_000, "BR", now - timedelta(minutes=120), "test")
    assert abs(term_score(worked, now, cfg) - 2.150525854922613) < 1e-9

    rng = random.Random(811_2026)
    terms = []
    for i in range(1000):
        volume = rng.randint(0, 10**7)
        age = rng.randint(0, 10**4)
        terms.append(make_term(f"term {i:04d}", volume, "BR", now - timedelta(minutes=age), "test"))
    ranked = rank_trends(terms, now, cfg)
    oracle = brute_force_rank(
        [(t.normalized_term, t.search_volume, (now - t.captured_at).total_seconds() / 60) for t in terms],
        half_life_minutes=120,
    )
    assert [(t.normalized_term, score) for t, score in ranked] == oracle


# ----------------------------------------------------------------------
# Criterion: stub/fingerprint oracle
# ----------------------------------------------------------------------

def test_stub_fingerprint_oracle():
    rng = random.Random(44_100)
    tag = re.compile(r"\[(\d+)\]$")
    checked = 0
    for _ in range(100):
        topic = "".join(rng.choice("abcdefghijklmnop áéíõç") for _ in range(rng.randint(1, 50)))
        if not topic.strip():
            topic = "pauta"
        context = validate_context(
            IdeationContext(
                topic=topic,
                keywords=tuple(f"k{i}" for i in range(rng.randint(0, 10))),
                tone=rng.choice(("neutral", "formal", "casual", "urgent")),
                editorial_section=rng.choice(("", "política", "esportes")),
            )
        )
        n_titles = rng.randint(1, 10)
        prompt = build_prompt(context, n_titles)
        raw = stub_generate(prompt)
        h = fnv1a_64_reference(prompt.encode("utf-8"))
        title_lines = [line for line in raw.split("\n") if line.startswith("TITLE: ")]
        assert len(title_lines) == n_titles
        for i, line in enumerate(title_lines, start=1):
            assert int(tag.search(line).group(1)) == (h + i) % 9973
        summary_line = raw.split("\n")[-1]
        assert f"({h % 9973})" in summary_line
        assert fingerprint(prompt) == f"{h:016x}"
        checked += 1
    assert checked == 100


# ----------------------------------------------------------------------
# Criterion: API contract suite
# ----------------------------------------------------------------------

def test_api_contract_suite():
    clock = SimulatedClock()
    store = MemoryStore(clock)
    provider = load_replay_fixture(FIXTURE_PATH)
    scheduler = PollScheduler(provider, "BR", store, clock, limit=20)
    clock.advance(600)
    scheduler.tick()
    client = TestClient(make_app(store, clock))

    # success shapes
    assert client.get("/api/health").status_code == 200
    trends = client.get("/api/trends", headers=AUTH)
    assert trends.status_code == 200 and len(trends.json()["items"]) == 20
    search = client.get("/api/trends/search?q=carnaval", headers=AUTH)
    assert search.status_code == 200 and search.json()["items"]
    created = client.post(
        "/api/pitches",
        json={"context": {"topic": "Pauta"}, "origin": "manual"},
        headers=AUTH,
    )
    assert created.status_code == 201
    pitch_id = created.json()["pitch_id"]
    listed = client.get("/api/pitches", headers=AUTH)
    assert listed.status_code == 200 and listed.json()["total_count"] == 1
    generated = client.post(f"/api/pitches/{pitch_id}/suggestions", json={}, headers=AUTH)
    assert generated.status_code == 201
    fetched = client.get(f"/api/pitches/{pitch_id}", headers=AUTH)
    assert fetched.status_code == 200
    saved = client.put(
        f"/api/pitches/{pitch_id}/draft",
        json={"title": "t", "body": "b", "expected_version": 0},
        headers=AUTH,
    )
    assert saved.status_code == 200
    got_draft = client.get(f"/api/pitches/{pitch_id}/draft", headers=AUTH)
    assert got_draft.status_code == 200

    # 304: conditional revalidation
    etag = trends.headers["etag"]
    cached = client.get("/api/trends", headers={**AUTH, "If-None-Match": etag})
    assert cached.status_code == 304 and cached.content == b""

    # 401: every guarded route
    for method, path in [
        ("GET", "/api/trends"),
        ("GET", "/api/trends/search?q=x"),
        ("GET", "/api/pitches"),
        ("POST", "/api/pitches"),
        ("GET", f"/api/pitches/{pitch_id}"),
        ("POST", f"/api/pitches/{pitch_id}/suggestions"),
        ("GET", f"/api/pitches/{pitch_id}/draft"),
        ("PUT", f"/api/pitches/{pitch_id}/draft"),
    ]:
        response = client.request(method, path)
        assert response.status_code == 401
        assert_problem(response, "unauthorized")

    # 400 family
    assert_problem(client.get("/api/trends?limit=0", headers=AUTH))
    assert client.get("/api/trends?limit=0", headers=AUTH).status_code == 400
    assert client.get("/api/trends/search", headers=AUTH).status_code == 400
    bad_context = client.post(
        "/api/pitches", json={"context": {"topic": ""}, "origin": "manual"}, headers=AUTH
    )
    assert bad_context.status_code == 400
    assert_problem(bad_context, "invalid_context")
    refine_no_feedback = client.post(
        f"/api/pitches/{pitch_id}/suggestions",
        json={"refine_of": "s-1", "feedback": ""},
        headers=AUTH,
    )
    assert refine_no_feedback.status_code == 400

    # 404
    missing = client.get("/api/pitches/p-404", headers=AUTH)
    assert missing.status_code == 404
    assert_problem(missing, "not_found")

    # 409 with current_version detail
    conflict = client.put(
        f"/api/pitches/{pitch_id}/draft",
        json={"title": "x", "body": "y", "expected_version": 0},
        headers=AUTH,
    )
    assert conflict.status_code == 409
    assert assert_problem(conflict, "version_conflict")["detail"]["current_version"] == 1

    # 422: illegal state
    ideation = client.post(
        "/api/pitches", json={"context": {"topic": "Nova"}, "origin": "manual"}, headers=AUTH
    ).json()
    illegal = client.put(
        f"/api/pitches/{ideation['pitch_id']}/draft",
        json={"title": "t", "body": "b", "expected_version": 0},
        headers=AUTH,
    )
    assert illegal.status_code == 422
    assert_problem(illegal, "illegal_state")

    # 502: provider exhausted
    class Down(GenerativeProvider):
        descriptor = GenerativeDescriptor("down", "stub")

        def generate(self, prompt):
            raise GenerationError("unreachable")

    down_engine = SuggestionEngine(
        store, Down(), policy=RetryPolicy(max_attempts=2), clock=clock, sleep=lambda s: None
    )
    down_client = TestClient(make_app(store, clock, engine=down_engine))
    unavailable = down_client.post(
        f"/api/pitches/{pitch_id}/suggestions", json={}, headers=AUTH
    )
    assert unavailable.status_code == 502
    assert_problem(unavailable, "provider_unavailable")

    # 429: concurrency cap saturated
    release = threading.Event()
    started = threading.Event()

    class Blocking(GenerativeProvider):
        descriptor = GenerativeDescriptor("blocking", "stub")

        def generate(self, prompt):
            started.set()
            release.wait(timeout=10)
            return stub_generate(prompt)

    capped_engine = SuggestionEngine(
        store, Blocking(), clock=clock, sleep=lambda s: None, max_in_flight=1
    )
    capped_client = TestClient(make_app(store, clock, engine=capped_engine))
    url = f"/api/pitches/{pitch_id}/suggestions"
    worker = threading.Thread(target=lambda: capped_client.post(url, json={}, headers=AUTH))
    worker.start()
    try:
        assert started.wait(timeout=5)
        saturated = capped_client.post(url, json={}, headers=AUTH)
        assert saturated.status_code == 429
        assert_problem(saturated, "over_capacity")
    finally:
        release.set()
        worker.join(timeout=5)


# ----------------------------------------------------------------------
# Criterion: store properties
# ----------------------------------------------------------------------

CONTEXT = validate_context(IdeationContext(topic="Pauta de teste"))


def _suggestion(store, pitch_id: str) -> SuggestionSet:
    return SuggestionSet(
        suggestion_id=store.new_suggestion_id(),
        pitch_id=pitch_id,
        titles=("T1",),
        summary="Resumo.",
        provider_id="stub",
        prompt_fingerprint="0" * 16,
        created_at=store.clock.now(),
        n_titles=1,
    )


def test_store_properties(tmp_path):
    # 10,000 random operation sequences vs. the transition-table oracle
    rng = random.Random(606_2026)
    clock = SimulatedClock()
    for sequence in range(10_000):
        store = MemoryStore(clock)
        oracle = StatusOracle()
        pitch = store.create_pitch(CONTEXT, "manual")
        oracle.create(pitch.pitch_id)
        pitch_id = pitch.pitch_id
        for _ in range(rng.randint(1, 8)):
            op = rng.choice(("attach", "save", "save_stale", "finalize"))
            if op == "attach":
                if oracle.can_attach(pitch_id):
                    store.attach_suggestion_set(pitch_id, _suggestion(store, pitch_id))
                    oracle.apply_attach(pitch_id)
                else:
                    with pytest.raises(IllegalState):
                        store.attach_suggestion_set(pitch_id, _suggestion(store, pitch_id))
            elif op == "save":
                expected = oracle.version[pitch_id]
                if oracle.can_save(pitch_id, expected):
                    store.save_draft(pitch_id, "t", "b", expected)
                    oracle.apply_save(pitch_id)
                else:
                    with pytest.raises(IllegalState):
                        store.save_draft(pitch_id, "t", "b", expected)
            elif op == "save_stale":
                with pytest.raises((VersionConflict, IllegalState)):
                    store.save_draft(pitch_id, "t", "b", oracle.version[pitch_id] + 3)
            else:
                if oracle.can_finalize(pitch_id):
                    store.finalize_pitch(pitch_id)
                    oracle.apply_finalize(pitch_id)
                else:
                    with pytest.raises(IllegalState):
                        store.finalize_pitch(pitch_id)
            assert store.get_pitch(pitch_id).status == oracle.status[pitch_id], (
                f"sequence {sequence}: store diverged from the transition table"
            )

    # 8 concurrent saves with the same expected_version: exactly one winner
    store = SqliteStore(tmp_path / "race.sqlite3", clock)
    pitch = store.create_pitch(CONTEXT, "manual")
    store.attach_suggestion_set(pitch.pitch_id, _suggestion(store, pitch.pitch_id))
    barrier = threading.Barrier(8)
    outcomes: list[str] = []
    lock = threading.Lock()

    def race(i: int) -> None:
        barrier.wait()
        try:
            store.save_draft(pitch.pitch_id, f"t{i}", f"b{i}", 0)
            result = "win"
        except VersionConflict:
            result = "conflict"
        with lock:
            outcomes.append(result)

    threads = [threading.Thread(target=race, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert outcomes.count("win") == 1 and outcomes.count("conflict") == 7
    assert store.get_draft(pitch.pitch_id).version == 1

    # durability: acknowledged writes visible after an orderly restart
    exported = store.export_state()
    store.close()
    reopened = SqliteStore(tmp_path / "race.sqlite3", clock)
    try:
        assert reopened.export_state() == exported
        assert reopened.get_draft(pitch.pitch_id).version == 1
        assert reopened.get_pitch(pitch.pitch_id).status == "drafting"
    finally:
        reopened.close()


# ----------------------------------------------------------------------
# Criterion: parser round-trip
# ----------------------------------------------------------------------

def test_parser_round_trip():
    rng = random.Random(77)
    for trial in range(50):
        topic = "".join(rng.choice("abcdefgh ãé") for _ in range(rng.randint(1, 40))) or "pauta"
        if not topic.strip():
            topic = "pauta"
        n_titles = rng.randint(1, 10)
        context = validate_context(IdeationContext(topic=topic))
        raw = stub_generate(build_prompt(context, n_titles))
        parsed = parse_generation(raw, n_titles)
        assert len(parsed.titles) == n_titles
        assert parsed.summary and not parsed.truncated

    fixtures = sorted(MALFORMED_DIR.glob("*.txt"))
    assert len(fixtures) == 20, "the malformed-response corpus must hold 20 fixtures"
    for fixture in fixtures:
        with pytest.raises(MalformedGeneration):
            parse_generation(fixture.read_text(encoding="utf-8"), 3)
