"""HTTP service wrapping the editing engine.

Status mapping: 200 success; 400 malformed body or command syntax; 404 no
scenario / unknown resource; 409 stale base version; 422 other domain
errors.  Every successful response carries the version id it reflects.
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from ..errors import (
    CommandSyntaxError,
    NoScenarioError,
    OutOfRangeError,
    ScenarioFormatError,
    SceneSplatError,
    VersionConflictError,
)
from . import engine
from .config import EngineConfig, load_engine_config
from .models import ModelBundle, default_models
from .schemas import (
    ConflictsResponse,
    EditBody,
    EditResponse,
    FramesResponse,
    LoadRequest,
    LoadResponse,
    QueryBody,
    QueryResponse,
    RefineBody,
    RefineResponse,
    ScenarioResponse,
    UndoBody,
    VersionResponse,
)
from .session import SessionStore

_STATUS = {
    CommandSyntaxError: 400,
    ScenarioFormatError: 400,
    NoScenarioError: 404,
    OutOfRangeError: 422,
    VersionConflictError: 409,
}


def create_app(
    store: SessionStore | None = None,
    models: ModelBundle | None = None,
    config: EngineConfig | None = None,
) -> FastAPI:
    app = FastAPI(title="scenesplat", docs_url=None, redoc_url=None)
    app.state.store = store or SessionStore()
    app.state.models = models or default_models()
    app.state.config = config or load_engine_config()

    @app.exception_handler(SceneSplatError)
    async def _domain_error(request: Request, exc: SceneSplatError):
        status = 422
        for klass, code in _STATUS.items():
            if isinstance(exc, klass):
                status = code
                break
        body = {"error": exc.code, "message": str(exc)}
        if isinstance(exc, CommandSyntaxError):
            body["position"] = exc.position
        return JSONResponse(status_code=status, content=body)

    @app.get("/scenario", response_model=ScenarioResponse)
    def get_scenario():
        return engine.do_scenario(app.state.store)

    @app.post("/load", response_model=LoadResponse)
    def post_load(body: LoadRequest):
        return engine.do_load_document(app.state.store, body.scenario)

    @app.post("/query", response_model=QueryResponse)
    def post_query(body: QueryBody):
        return engine.do_query(
            app.state.store,
            app.state.models,
            app.state.config,
            body.text,
            body.kind_hint,
            body.time_window,
        )

    @app.post("/edit", response_model=EditResponse)
    def post_edit(body: EditBody):
        return engine.do_edit(
            app.state.store,
            app.state.models,
            app.state.config,
            body.command,
            body.base_version,
        )

    @app.post("/refine", response_model=RefineResponse)
    def post_refine(body: RefineBody):
        overrides = dict(body.overrides)
        if body.bypass:
            overrides["bypass"] = True
        return engine.do_refine(
            app.state.store, app.state.config, body.base_version, overrides
        )

    @app.post("/undo", response_model=VersionResponse)
    def post_undo(body: UndoBody | None = None):
        base = body.base_version if body else None
        version = app.state.store.undo(base)
        return {"version": version}

    @app.get("/frames", response_model=FramesResponse)
    def get_frames(
        from_t: float = Query(0.0, alias="from"),
        to_t: float | None = Query(None, alias="to"),
    ):
        store = app.state.store
        scenario = store.scenario()
        t_end = (
            to_t
            if to_t is not None
            else (scenario.horizon - 1) * scenario.timestep
        )
        return engine.do_frames(store, from_t, t_end)

    @app.get("/conflicts", response_model=ConflictsResponse)
    def get_conflicts():
        return engine.do_conflicts(app.state.store, app.state.config)

    @app.get("/export")
    def get_export(frame: int = 0):
        return engine.do_export(app.state.store, frame)

    return app
