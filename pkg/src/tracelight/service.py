"""HTTP JSON API: ingestion, group browsing with suggestions, selections.

Every non-2xx response body has the one error shape
``{"status": int, "code": str, "message": str}``. Mutations serialize
through the store's writer lock; request parsing happens before the lock
is taken so reads never wait on other requests' payloads.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import payloads
from .dedup import SubsystemRule
from .errors import (
    IndexOutOfRange,
    InvalidK,
    IoFailure,
    ParseError,
    TracelightError,
    UnknownGroup,
    UnrecognizedFormat,
)
from .highlight import DEFAULT_K
from .parser import RawReport
from .store import TriageStore

MAX_PAGE_LIMIT = 500
DEFAULT_PAGE_LIMIT = 50


class IngestBody(BaseModel):
    format: Literal["auto", "jvm", "python"] = "auto"
    text: str
    product: str | None = None


class SelectionBody(BaseModel):
    selected_indices: list[int]
    author: str | None = None


def api_error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"status": status, "code": code, "message": message},
    )


def _error_for(exc: TracelightError) -> JSONResponse:
    if isinstance(exc, UnrecognizedFormat):
        return api_error(400, "unrecognized_format", str(exc))
    if isinstance(exc, ParseError):
        return api_error(400, "parse_error", str(exc))
    if isinstance(exc, UnknownGroup):
        return api_error(404, "unknown_group", str(exc))
    if isinstance(exc, IndexOutOfRange):
        return api_error(400, "index_out_of_range", str(exc))
    if isinstance(exc, InvalidK):
        return api_error(400, "invalid_k", str(exc))
    if isinstance(exc, IoFailure):
        return api_error(500, "io_failure", str(exc))
    return api_error(500, "internal_error", str(exc))


def create_app(
    store: TriageStore,
    k: int = DEFAULT_K,
    rules: list[SubsystemRule] | None = None,
    cors_origins: list[str] | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    if k < 1:
        raise InvalidK(f"k must be >= 1, got {k}")
    app = FastAPI(title="tracelight", openapi_url=None, docs_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins if cors_origins is not None else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    rules = rules or []

    @app.exception_handler(TracelightError)
    async def tracelight_error_handler(request: Request, exc: TracelightError):
        return _error_for(exc)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return api_error(400, "invalid_request", str(exc.errors()[:1]))

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(request: Request, exc: StarletteHTTPException):
        code = {404: "not_found", 405: "method_not_allowed"}.get(
            exc.status_code, "http_error"
        )
        return api_error(exc.status_code, code, str(exc.detail))

    @app.post("/api/v1/traces", status_code=201)
    def ingest_trace(body: IngestBody):
        if not body.text.strip():
            raise ParseError("empty trace text")
        result = store.ingest_report(
            RawReport(text=body.text, format_hint=body.format, product=body.product)
        )
        group = result.group
        suggestions = store.suggest_for_keys(group.frame_keys, k)
        return {
            "group_id": group.group_id,
            "is_new_group": result.is_new_group,
            "occurrence_count": group.occurrence_count,
            "frames": payloads.frames_payload(result.trace, group.frame_keys, rules),
            "suggestions": payloads.suggestions_payload(suggestions),
            "selection": payloads.selection_payload(
                store.get_selection(group.group_id)
            ),
        }

    @app.get("/api/v1/groups")
    def list_groups(limit: str = str(DEFAULT_PAGE_LIMIT), offset: str = "0"):
        try:
            limit_n = int(limit)
            offset_n = int(offset)
        except ValueError:
            return api_error(400, "invalid_pagination", "limit/offset must be integers")
        if not (1 <= limit_n <= MAX_PAGE_LIMIT) or offset_n < 0:
            return api_error(
                400,
                "invalid_pagination",
                f"limit must be 1..{MAX_PAGE_LIMIT} and offset >= 0",
            )
        groups = store.list_groups()
        page = groups[offset_n : offset_n + limit_n]
        return {
            "total": len(groups),
            "groups": [
                payloads.group_payload(g, store.get_selection(g.group_id))
                for g in page
            ],
        }

    @app.get("/api/v1/groups/{group_id}")
    def get_group(group_id: str):
        group = store.get_group(group_id)
        selection = store.get_selection(group_id)
        suggestions = store.suggest_for_keys(group.frame_keys, k)
        return {
            "group": payloads.group_payload(group, selection),
            "frames": payloads.frames_payload(
                group.representative, group.frame_keys, rules
            ),
            "suggestions": payloads.suggestions_payload(suggestions),
            "selection": payloads.selection_payload(selection),
        }

    @app.put("/api/v1/groups/{group_id}/selection")
    def put_selection(group_id: str, body: SelectionBody):
        selection = store.save_selection(
            group_id, body.selected_indices, author=body.author
        )
        return {"selection": payloads.selection_payload(selection)}

    @app.get("/api/v1/stats")
    def get_stats():
        n_groups, n_reports, distinct = store.corpus_size()
        return {
            "n_groups": n_groups,
            "n_reports": n_reports,
            "distinct_frames": distinct,
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
