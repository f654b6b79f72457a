"""Uniform machine-readable error bodies.

Every non-2xx/304 response carries the same shape:

    {"code": "version_conflict", "message": "...", "detail": {...}}

``code`` is stable and machine-matchable; ``message`` is for humans;
``detail`` is optional structured context (e.g. the current draft version).
"""

from __future__ import annotations

from fastapi.responses import JSONResponse


def problem(status_code: int, code: str, message: str, detail: dict | None = None) -> JSONResponse:
    body: dict = {"code": code, "message": message}
    if detail is not None:
        body["detail"] = detail
    return JSONResponse(status_code=status_code, content=body)


_STATUS_CODES = {
    400: "bad_request",
    401: "unauthorized",
    404: "not_found",
    405: "method_not_allowed",
    409: "conflict",
    422: "illegal_state",
    429: "over_capacity",
    500: "internal_error",
    502: "provider_unavailable",
}


def code_for_status(status_code: int) -> str:
    return _STATUS_CODES.get(status_code, "error")
