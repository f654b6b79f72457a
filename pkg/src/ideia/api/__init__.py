"""HTTP API: bearer-token auth, ETag cache validation, problem-shaped errors."""

from .app import ApiConfig, create_app, trends_etag
from .description import describe, write_doc
from .problems import code_for_status, problem

__all__ = ["ApiConfig", "code_for_status", "create_app", "describe", "problem", "trends_etag", "write_doc"]
