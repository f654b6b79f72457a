"""HTTP interface: trends, pitch workflow, suggestions, drafts.

Handlers are stateless; everything lives in the store and the published
snapshot, so any request sequence replays identically against a fresh
server given the stub provider and a simulated clock.

Trend reads are cache-validated: the entity tag is a pure function of
(cycle_seq, region, limit), so clients polling with If-None-Match get 304s
until a poll cycle actually lands.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..clock import Clock, SystemClock, to_rfc3339
from ..store.base import (
    DraftNotFound,
    EditorialStore,
    IllegalState,
    InvalidPage,
    MissingTrendRef,
    PitchNotFound,
    SuggestionNotFound,
    VersionConflict,
)
from ..suggest.engine import EmptyFeedback, OverCapacity, ProviderUnavailable, SuggestionEngine
from ..suggest.models import MAX_TITLES, IdeationContext, InvalidContext
from ..trends.models import RankingConfig
from ..trends.normalize import EmptyTerm
from ..trends.ranking import rank_trends
from .problems import code_for_status, problem as _problem

DEFAULT_REGION = "BR"
DEFAULT_TRENDS_LIMIT = 20
DEFAULT_N_TITLES = 3


@dataclass(frozen=True)
class ApiConfig:
    auth_token: str
    ui_poll_hint_seconds: int = 60

    def __post_init__(self) -> None:
        if not self.auth_token:
            raise ValueError("auth_token must not be empty")


class BadRequest(Exception):
    def __init__(self, message: str, code: str = "bad_request"):
        super().__init__(message)
        self.code = code
        self.message = message


def trends_etag(cycle_seq: int, region: str, limit: int) -> str:
    return f'"trends-{cycle_seq}-{region}-{limit}"'


async def _json_body(request: Request) -> dict:
    raw = await request.body()
    if not raw:
        return {}
    try:
        body = json.loads(raw)
    except json.JSONDecodeError:
        raise BadRequest("request body is not valid JSON")
    if not isinstance(body, dict):
        raise BadRequest("request body must be a JSON object")
    return body


def _int_param(value: str | None, name: str, default: int) -> int:
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        raise BadRequest(f"{name} must be an integer")


def create_app(
    store: EditorialStore,
    engine: SuggestionEngine,
    config: ApiConfig,
    clock: Clock | None = None,
    ranking: RankingConfig | None = None,
) -> FastAPI:
    clock = clock or SystemClock()
    ranking = ranking or RankingConfig()
    app = FastAPI(title="ideia", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.engine = engine
    app.state.config = config

    # ------------------------------------------------------------------
    # auth + uniform errors
    # ------------------------------------------------------------------

    @app.middleware("http")
    async def bearer_auth(request: Request, call_next):
        path = request.url.path
        if path.startswith("/api/") and path != "/api/health":
            expected = f"Bearer {config.auth_token}"
            if request.headers.get("authorization") != expected:
                return _problem(401, "unauthorized", "missing or invalid bearer token")
        return await call_next(request)

    @app.exception_handler(BadRequest)
    async def on_bad_request(request, exc: BadRequest):
        return _problem(400, exc.code, exc.message)

    @app.exception_handler(InvalidContext)
    async def on_invalid_context(request, exc: InvalidContext):
        return _problem(
            400, "invalid_context", str(exc), detail={"field": exc.field, "reason": exc.reason}
        )

    @app.exception_handler(MissingTrendRef)
    async def on_missing_trend_ref(request, exc):
        return _problem(400, "missing_trend_ref", str(exc))

    @app.exception_handler(EmptyFeedback)
    async def on_empty_feedback(request, exc):
        return _problem(400, "empty_feedback", str(exc))

    @app.exception_handler(EmptyTerm)
    async def on_empty_term(request, exc):
        return _problem(400, "bad_request", str(exc))

    @app.exception_handler(InvalidPage)
    async def on_invalid_page(request, exc):
        return _problem(400, "invalid_page", str(exc))

    @app.exception_handler(PitchNotFound)
    async def on_pitch_not_found(request, exc):
        return _problem(404, "not_found", f"pitch not found: {exc}")

    @app.exception_handler(SuggestionNotFound)
    async def on_suggestion_not_found(request, exc):
        return _problem(404, "not_found", f"suggestion set not found: {exc}")

    @app.exception_handler(DraftNotFound)
    async def on_draft_not_found(request, exc):
        return _problem(404, "not_found", f"no draft for pitch: {exc}")

    @app.exception_handler(VersionConflict)
    async def on_version_conflict(request, exc: VersionConflict):
        return _problem(
            409, "version_conflict", str(exc),
            detail={"current_version": exc.current_version},
        )

    @app.exception_handler(IllegalState)
    async def on_illegal_state(request, exc):
        return _problem(422, "illegal_state", str(exc))

    @app.exception_handler(OverCapacity)
    async def on_over_capacity(request, exc):
        return _problem(429, "over_capacity", str(exc))

    @app.exception_handler(ProviderUnavailable)
    async def on_provider_unavailable(request, exc):
        return _problem(502, "provider_unavailable", str(exc))

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request, exc):
        return _problem(400, "bad_request", "invalid request")

    @app.exception_handler(StarletteHTTPException)
    async def on_http_exception(request, exc: StarletteHTTPException):
        return _problem(exc.status_code, code_for_status(exc.status_code), str(exc.detail))

    @app.exception_handler(Exception)
    async def on_unexpected(request, exc):
        return _problem(500, "internal_error", "unexpected server error")

    # ------------------------------------------------------------------
    # trends
    # ------------------------------------------------------------------

    def _ranked_items(terms, limit: int | None = None) -> list[dict]:
        ranked = rank_trends(list(terms), clock.now(), ranking)
        if limit is not None:
            ranked = ranked[:limit]
        return [
            {
                "term": term.raw_term,
                "normalized_term": term.normalized_term,
                "volume": term.search_volume,
                "score": score,
                "captured_at": to_rfc3339(term.captured_at),
            }
            for term, score in ranked
        ]

    @app.get("/api/health")
    async def health():
        return {"status": "ok", "cycle_seq": store.current_cycle_seq()}

    @app.get("/api/trends")
    async def get_trends(request: Request):
        region = request.query_params.get("region", DEFAULT_REGION)
        limit = _int_param(request.query_params.get("limit"), "limit", DEFAULT_TRENDS_LIMIT)
        if limit < 1:
            raise BadRequest("limit must be >= 1")
        snapshot = store.current_snapshot(region=region)
        cycle_seq = snapshot.cycle_seq if snapshot else 0
        etag = trends_etag(cycle_seq, region, limit)
        if request.headers.get("if-none-match", "").strip() == etag:
            return Response(status_code=304, headers={"ETag": etag})
        body = {
            "cycle_seq": cycle_seq,
            "fetched_at": to_rfc3339(snapshot.fetched_at) if snapshot else None,
            "refresh_hint_seconds": config.ui_poll_hint_seconds,
            "items": _ranked_items(snapshot.terms, limit) if snapshot else [],
        }
        return JSONResponse(content=body, headers={"ETag": etag})

    @app.get("/api/trends/search")
    async def search_trends(request: Request):
        query = request.query_params.get("q")
        if query is None or not query.strip():
            raise BadRequest("q must not be empty")
        terms = store.search_terms(query)
        return {
            "cycle_seq": store.current_cycle_seq(),
            "refresh_hint_seconds": config.ui_poll_hint_seconds,
            "items": _ranked_items(terms),
        }

    # ------------------------------------------------------------------
    # pitches
    # ------------------------------------------------------------------

    @app.post("/api/pitches")
    async def create_pitch(request: Request):
        body = await _json_body(request)
        context_data = body.get("context")
        if not isinstance(context_data, dict):
            raise BadRequest("'context' object is required")
        origin = body.get("origin")
        if origin not in ("trend", "search", "manual"):
            raise BadRequest("'origin' must be one of trend, search, manual")
        context = IdeationContext.from_dict(context_data)
        pitch = store.create_pitch(context, origin, body.get("trend_ref"))
        return JSONResponse(
            status_code=201,
            content=pitch.to_dict(),
            headers={"Location": f"/api/pitches/{pitch.pitch_id}"},
        )

    @app.get("/api/pitches")
    async def list_pitches(request: Request):
        params = request.query_params
        offset = _int_param(params.get("offset"), "offset", 0)
        limit = _int_param(params.get("limit"), "limit", 50)
        items, total = store.list_pitches(
            status=params.get("status"),
            origin=params.get("origin"),
            text=params.get("text"),
            offset=offset,
            limit=limit,
        )
        return {"items": [p.to_dict() for p in items], "total_count": total}

    @app.get("/api/pitches/{pitch_id}")
    async def get_pitch(pitch_id: str):
        pitch = store.get_pitch(pitch_id)
        suggestions = store.list_suggestion_sets(pitch_id)
        return {"pitch": pitch.to_dict(), "suggestion_sets": [s.to_dict() for s in suggestions]}

    # ------------------------------------------------------------------
    # suggestions
    # ------------------------------------------------------------------

    @app.post("/api/pitches/{pitch_id}/suggestions")
    async def post_suggestions(pitch_id: str, request: Request):
        body = await _json_body(request)
        refine_of = body.get("refine_of")
        if refine_of is not None:
            feedback = body.get("feedback")
            if not isinstance(feedback, str) or not feedback.strip():
                raise BadRequest("'feedback' is required when refining", code="empty_feedback")
            parent = store.get_suggestion_set(refine_of)
            if parent.pitch_id != pitch_id:
                raise SuggestionNotFound(refine_of)
            suggestion = engine.refine(parent, feedback)
        else:
            n_titles = body.get("n_titles", DEFAULT_N_TITLES)
            if not isinstance(n_titles, int) or isinstance(n_titles, bool):
                raise BadRequest("'n_titles' must be an integer")
            if not 1 <= n_titles <= MAX_TITLES:
                raise BadRequest(f"'n_titles' must be in 1..{MAX_TITLES}")
            suggestion = engine.generate(pitch_id, n_titles=n_titles)
        return JSONResponse(status_code=201, content=suggestion.to_dict())

    # ------------------------------------------------------------------
    # drafts
    # ------------------------------------------------------------------

    @app.get("/api/pitches/{pitch_id}/draft")
    async def get_draft(pitch_id: str):
        draft = store.get_draft(pitch_id)
        pitch = store.get_pitch(pitch_id)
        return {**draft.to_dict(), "pitch_status": pitch.status}

    @app.put("/api/pitches/{pitch_id}/draft")
    async def put_draft(pitch_id: str, request: Request):
        body = await _json_body(request)
        finalize = body.get("finalize", False)
        if not isinstance(finalize, bool):
            raise BadRequest("'finalize' must be a boolean")
        has_save = "title" in body or "body" in body
        if not has_save and not finalize:
            raise BadRequest("nothing to do: provide title/body and expected_version, or finalize")
        if has_save:
            title = body.get("title")
            text = body.get("body")
            expected_version = body.get("expected_version")
            if not isinstance(title, str) or not isinstance(text, str):
                raise BadRequest("'title' and 'body' must be strings")
            if not isinstance(expected_version, int) or isinstance(expected_version, bool):
                raise BadRequest("'expected_version' must be an integer")
            store.save_draft(pitch_id, title, text, expected_version)
        if finalize:
            store.finalize_pitch(pitch_id)
        draft = store.get_draft(pitch_id)
        pitch = store.get_pitch(pitch_id)
        return {**draft.to_dict(), "pitch_status": pitch.status}

    return app
