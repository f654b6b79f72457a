"""Machine-readable description of the HTTP contract.

``describe()`` is the normative endpoint list as data; ``write_doc`` dumps it
to docs/api.json so external tooling (and the web client) can consume the
contract without scraping code. A test regenerates and compares, keeping the
committed document honest.
"""

from __future__ import annotations

import json
from pathlib import Path

PROBLEM_SHAPE = {
    "code": "machine-readable error code",
    "message": "human-readable explanation",
    "detail": "optional structured context",
}


def describe() -> dict:
    return {
        "service": "ideia",
        "protocol": "JSON over HTTP/1.1, UTF-8, RFC 3339 timestamps",
        "auth": "Authorization: Bearer <token> on every /api/* route except /api/health",
        "error_shape": PROBLEM_SHAPE,
        "endpoints": [
            {
                "method": "GET",
                "path": "/api/health",
                "auth": False,
                "success": {"status": 200, "body": {"status": "ok", "cycle_seq": "int"}},
                "errors": [],
            },
            {
                "method": "GET",
                "path": "/api/trends",
                "auth": True,
                "query": {"region": "region code (default BR)", "limit": "int >= 1 (default 20)"},
                "cache": "ETag from (cycle_seq, region, limit); If-None-Match hit returns 304",
                "success": {
                    "status": 200,
                    "body": {
                        "cycle_seq": "int",
                        "fetched_at": "rfc3339 | null",
                        "refresh_hint_seconds": "int",
                        "items": [
                            {
                                "term": "str",
                                "normalized_term": "str",
                                "volume": "int",
                                "score": "float",
                                "captured_at": "rfc3339",
                            }
                        ],
                    },
                },
                "errors": [400, 401],
            },
            {
                "method": "GET",
                "path": "/api/trends/search",
                "auth": True,
                "query": {"q": "non-empty search text"},
                "success": {"status": 200, "body": "same item shape as /api/trends"},
                "errors": [400, 401],
            },
            {
                "method": "POST",
                "path": "/api/pitches",
                "auth": True,
                "body": {"context": "IdeationContext", "origin": "trend|search|manual", "trend_ref": "str?"},
                "success": {"status": 201, "headers": ["Location"], "body": "Pitch"},
                "errors": [400, 401],
            },
            {
                "method": "GET",
                "path": "/api/pitches",
                "auth": True,
                "query": {
                    "status": "pitch status?",
                    "origin": "pitch origin?",
                    "text": "substring filter?",
                    "offset": "int >= 0",
                    "limit": "1..100",
                },
                "success": {"status": 200, "body": {"items": ["Pitch"], "total_count": "int"}},
                "errors": [400, 401],
            },
            {
                "method": "GET",
                "path": "/api/pitches/{pitch_id}",
                "auth": True,
                "success": {
                    "status": 200,
                    "body": {"pitch": "Pitch", "suggestion_sets": ["SuggestionSet"]},
                },
                "errors": [401, 404],
            },
            {
                "method": "POST",
                "path": "/api/pitches/{pitch_id}/suggestions",
                "auth": True,
                "body": {
                    "n_titles": "1..10 (default 3, fresh generation only)",
                    "refine_of": "suggestion_id? (switches to refinement)",
                    "feedback": "non-empty str (required with refine_of)",
                },
                "success": {"status": 201, "body": "SuggestionSet"},
                "errors": [400, 401, 404, 422, 429, 502],
            },
            {
                "method": "GET",
                "path": "/api/pitches/{pitch_id}/draft",
                "auth": True,
                "success": {"status": 200, "body": "Draft + pitch_status"},
                "errors": [401, 404],
            },
            {
                "method": "PUT",
                "path": "/api/pitches/{pitch_id}/draft",
                "auth": True,
                "body": {
                    "title": "str (with body + expected_version)",
                    "body": "str",
                    "expected_version": "int (0 on first save)",
                    "finalize": "bool (may be sent alone)",
                },
                "success": {"status": 200, "body": "Draft + pitch_status"},
                "errors": [400, 401, 404, 409, 422],
            },
        ],
    }


def write_doc(path: str | Path) -> None:
    Path(path).write_text(json.dumps(describe(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
