"""HTTP surface over the question-answering pipeline.

Three endpoints: ``POST /api/ask`` runs one question end to end and returns
the full evidence trail, ``GET /api/pipelines`` advertises the pipeline
kinds and their options, and ``GET /api/health`` reports graph counts and
backend reachability. Domain outcomes (schema_error, parse_error) travel as
200 responses with a status field; only transport and backend failures use
error codes.
"""

from __future__ import annotations

import threading
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from ..pipeline import PIPELINE_KINDS, SUBGRAPH_MODES, PipelineOptions
from ..serialize import response_to_wire
from .runtime import ServiceRuntime


class AskOptions(BaseModel):
    entity_enhancement: bool = True
    subgraph_mode: Literal["llm", "deterministic", "off"] = "deterministic"
    verbalize: bool = True
    verbalize_temperature: float = Field(default=0.0, ge=0.0, le=2.0)
    compact: bool = False


class AskRequest(BaseModel):
    question: str
    pipeline_kind: Literal["hybrid", "llm_only"] = "hybrid"
    id: str | None = None
    options: AskOptions = Field(default_factory=AskOptions)


_OPTION_SCHEMAS = {
    "hybrid": {
        "entity_enhancement": {"type": "boolean", "default": True},
        "subgraph_mode": {
            "type": "string",
            "enum": list(SUBGRAPH_MODES),
            "default": "deterministic",
        },
        "verbalize": {"type": "boolean", "default": True},
        "verbalize_temperature": {"type": "number", "default": 0.0},
        "compact": {"type": "boolean", "default": False},
    },
    "llm_only": {
        "verbalize_temperature": {"type": "number", "default": 0.0},
        "compact": {"type": "boolean", "default": False},
    },
}


def _field_path(error: dict) -> str:
    parts = [str(part) for part in error.get("loc", ()) if part != "body"]
    return ".".join(parts) or "body"


def create_app(runtime: ServiceRuntime | None = None) -> FastAPI:
    """Build the application. ``runtime=None`` produces a server that
    answers health checks with 503 until a runtime is attached to
    ``app.state.runtime``."""
    app = FastAPI(title="graphqa", docs_url=None, redoc_url=None)
    app.state.runtime = runtime

    origins = runtime.config.cors_origins if runtime else ["*"]
    app.add_middleware(
        CORSMiddleware,
        allow_origins=origins,
        allow_methods=["*"],
        allow_headers=["*"],
    )
    parallelism = runtime.config.parallelism if runtime else 1
    gate = threading.Semaphore(parallelism)

    @app.exception_handler(RequestValidationError)
    def malformed_request(request: Request, exc: RequestValidationError) -> JSONResponse:
        first = exc.errors()[0] if exc.errors() else {"msg": "invalid request"}
        detail = f"{_field_path(first)}: {first.get('msg', 'invalid value')}"
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.post("/api/ask")
    def ask(request: AskRequest) -> JSONResponse:
        if not request.question.strip():
            return JSONResponse(
                status_code=400,
                content={"detail": "question: must be a non-empty string"},
            )
        current: ServiceRuntime | None = app.state.runtime
        if current is None:
            return JSONResponse(status_code=503, content={"detail": "service not ready"})
        options = PipelineOptions(
            entity_enhancement=request.options.entity_enhancement,
            subgraph_mode=request.options.subgraph_mode,
            verbalize=request.options.verbalize,
            pipeline_kind=request.pipeline_kind,
            verbalize_temperature=request.options.verbalize_temperature,
        )
        with gate:
            response = current.pipeline.answer(request.question, options)
        if response.status == "backend_error":
            return JSONResponse(
                status_code=500,
                content={"detail": response.answer or "backend error"},
            )
        body = response_to_wire(response)
        body["id"] = request.id
        if request.options.compact:
            body["evidence"].pop("subgraph", None)
        return JSONResponse(status_code=200, content=body)

    @app.get("/api/pipelines")
    def pipelines() -> list[dict]:
        return [
            {"kind": kind, "options": _OPTION_SCHEMAS[kind]}
            for kind in PIPELINE_KINDS
        ]

    @app.get("/api/health")
    def health() -> JSONResponse:
        current: ServiceRuntime | None = app.state.runtime
        if current is None:
            return JSONResponse(
                status_code=503,
                content={"status": "unavailable", "detail": "graph not ingested"},
            )
        return JSONResponse(
            status_code=200,
            content={
                "status": "ok",
                "nodes": current.graph.node_count,
                "edges": current.graph.edge_count,
                "backend": current.config.backend_kind,
                "backend_reachable": current.backend_reachable,
            },
        )

    if runtime is not None and runtime.config.frontend_dir is not None:
        app.mount(
            "/",
            StaticFiles(directory=runtime.config.frontend_dir, html=True),
            name="frontend",
        )
    return app
