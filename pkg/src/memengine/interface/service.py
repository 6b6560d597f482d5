"""HTTP facade over one store: query, ingest, stats, and unit lookup."""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from ..core.config import ConfigError
from ..ingest.events import EventError, event_from_dict
from ..orchestrator.engine import AnswerError, MemoryEngine
from ..storage.hot import StorageError, WriterConflict, mau_to_json

RESPONSE_VERSION = 1

ABLATION_FLAGS = frozenset({
    "disable_bm25", "disable_pyramid", "disable_graph",
    "disable_summarization",
})


class QueryBody(BaseModel):
    question: str = Field(min_length=1)
    top_k: int | None = None
    budget: int | None = None
    ablation: dict[str, bool] | None = None


class ServiceState:
    """Holds the engine and the single-writer ingest lock."""

    def __init__(self, store_dir: str | Path) -> None:
        self.store_dir = Path(store_dir)
        self.engine: MemoryEngine | None = None
        self.writable = False
        self.ingest_lock = threading.Lock()

    def open(self) -> None:
        try:
            self.engine = MemoryEngine.open(self.store_dir, writer=True)
            self.writable = True
        except WriterConflict:
            self.engine = MemoryEngine.open(self.store_dir, writer=False)
            self.writable = False
        except StorageError:
            self.engine = None
            self.writable = False

    def require_engine(self) -> MemoryEngine:
        if self.engine is None:
            raise HTTPException(status_code=503, detail="store not initialized")
        return self.engine


def create_app(store_dir: str | Path) -> FastAPI:
    app = FastAPI(title="memengine", version="0.1.0")
    state = ServiceState(store_dir)
    state.open()
    app.state.service = state

    @app.exception_handler(RequestValidationError)
    def malformed_body(_req: Request, exc: RequestValidationError) -> JSONResponse:
        # the wire contract reports every malformed body as a plain 400
        detail = [{"loc": list(err.get("loc", ())), "msg": str(err.get("msg", ""))}
                  for err in exc.errors()]
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz() -> str:
        return "ok"

    @app.get("/v1/stats")
    def stats() -> dict[str, Any]:
        return state.require_engine().stats()

    @app.post("/v1/query")
    def query(body: QueryBody) -> dict[str, Any]:
        engine = state.require_engine()
        overrides: dict[str, Any] = {}
        if body.top_k is not None:
            overrides["top_k_override"] = body.top_k
        if body.budget is not None:
            overrides["budget_B_tokens"] = body.budget
        for flag, value in (body.ablation or {}).items():
            if flag not in ABLATION_FLAGS:
                raise HTTPException(status_code=400,
                                    detail=f"unknown ablation flag {flag!r}")
            overrides[flag] = value
        try:
            cfg = engine.cfg.replace(**overrides) if overrides else None
        except (ConfigError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        try:
            answer = engine.answer_question(body.question, cfg=cfg)
        except AnswerError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from exc
        doc = answer.to_dict()
        doc["version"] = RESPONSE_VERSION
        return doc

    @app.post("/v1/ingest")
    def ingest(body: dict[str, Any]) -> dict[str, Any]:
        engine = state.require_engine()
        if not state.writable:
            raise HTTPException(status_code=409,
                                detail="store is held by another writer")
        try:
            event = event_from_dict(body)
        except EventError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        with state.ingest_lock:
            result = engine.ingest(event)
        if result.accepted and result.mau is not None:
            return {"accepted": True, "mau_id": result.mau.id}
        return {"accepted": False, "reason": result.reason}

    @app.post("/v1/commit")
    def commit() -> dict[str, Any]:
        engine = state.require_engine()
        if not state.writable:
            raise HTTPException(status_code=409,
                                detail="store is held by another writer")
        with state.ingest_lock:
            return engine.commit()

    @app.get("/v1/mau/{mau_id}")
    def get_mau(mau_id: int,
                embedding: int = Query(default=0)) -> dict[str, Any]:
        engine = state.require_engine()
        mau = engine.get_mau(mau_id)
        if mau is None:
            raise HTTPException(status_code=404, detail=f"no mau {mau_id}")
        doc = mau_to_json(mau)
        if not embedding:
            doc.pop("embedding", None)
        return doc

    return app
