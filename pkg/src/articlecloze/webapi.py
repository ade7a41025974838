"""HTTP wire API over the annotation service.

Endpoints (JSON request/response):

* ``POST /api/sessions`` ``{participant_id}`` -> session summary
* ``GET  /api/sessions/{sid}/next`` -> ``{"status": "item", "item": ...}``
  or ``{"status": "completed"}``
* ``POST /api/sessions/{sid}/responses`` ``{item_token, choice, elapsed_ms?}``
  -> ``{"outcome": "continue" | "completed" | "terminated_qc"}``
* ``GET  /api/export`` -> the annotations file, one JSON record per line
* ``GET  /api/meta`` -> instructions and the fixed choice list

Item payloads never include gold labels or quality-control flags.
"""

from __future__ import annotations

import io
import json
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse, PlainTextResponse
from pydantic import BaseModel

from . import service as svc
from .agreement import write_annotations

INSTRUCTIONS = """\
You will see three sentences per trial. In the middle sentence one word has
been replaced with BLANK; your task is to restore it. The missing word is
always an article: a(n), the, or the zero article (Ø), meaning that no word
at all belongs in the gap. In the first and last sentence all words are
shown, and the character Ø marks places where an article could have occurred
but does not. Read all three sentences before answering.

Example:

    But there is no escape for ø non - runners , who are required to sign up
    for ø light duties .
    That takes BLANK care of Sunday .
    We cannot refuse , because we are in ø awe of the formidable women
    running the PTA .

Here the correct answer is Zero (Ø): "takes care of" carries no article.

Answer every trial with one of:
    1. a/an
    2. the
    3. Zero (Ø)
"""


class CreateSessionRequest(BaseModel):
    participant_id: str


class SubmitRequest(BaseModel):
    item_token: str
    choice: str
    elapsed_ms: Optional[int] = None


_ERROR_STATUS = {
    svc.UnknownSessionError: 404,
    svc.DuplicateSessionError: 409,
    svc.InsufficientItemsError: 409,
    svc.SessionStateError: 409,
    svc.SubmissionOrderError: 409,
    svc.InvalidChoiceError: 422,
}


def _http_error(exc: svc.ServiceError) -> HTTPException:
    status = _ERROR_STATUS.get(type(exc), 400)
    return HTTPException(status_code=status, detail=str(exc))


def create_app(service: svc.AnnotationService, frontend_dir: Optional[str] = None) -> FastAPI:
    """The wire API; optionally serves a built frontend directory at /."""
    app = FastAPI(title="articlecloze annotation service")

    @app.get("/api/meta")
    def meta() -> dict:
        return {
            "instructions": INSTRUCTIONS,
            "choices": list(svc.CHOICES),
            "choice_labels": [label.value for label in svc.CHOICE_LABELS],
            "items_per_session": service.n_items + service.qc_count,
        }

    @app.post("/api/sessions", status_code=201)
    def create_session(req: CreateSessionRequest) -> dict:
        try:
            session = service.create_session(req.participant_id)
        except svc.ServiceError as exc:
            raise _http_error(exc) from exc
        return {"session_id": session.session_id, "total_items": len(session.items)}

    @app.get("/api/sessions/{session_id}/next")
    def next_item(session_id: str) -> dict:
        try:
            item = service.next_item(session_id)
        except svc.ServiceError as exc:
            raise _http_error(exc) from exc
        if item is None:
            return {"status": "completed"}
        return {"status": "item", "item": item.to_json()}

    @app.post("/api/sessions/{session_id}/responses")
    def submit(session_id: str, req: SubmitRequest) -> dict:
        try:
            outcome = service.submit_response(
                session_id, req.item_token, req.choice, elapsed_ms=req.elapsed_ms
            )
        except svc.ServiceError as exc:
            raise _http_error(exc) from exc
        return {"outcome": outcome.value}

    @app.get("/api/export")
    def export() -> PlainTextResponse:
        buf = io.StringIO()
        for record in service.export_annotations():
            buf.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")
        return PlainTextResponse(buf.getvalue(), media_type="application/x-ndjson")

    if frontend_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return (
                "<!doctype html><title>articlecloze</title>"
                "<p>Annotation service is running. The survey frontend is served "
                "separately; see the API under <code>/api/</code>.</p>"
            )

    return app


def export_to_path(service: svc.AnnotationService, path: str) -> int:
    records = service.export_annotations()
    write_annotations(records, path)
    return len(records)
