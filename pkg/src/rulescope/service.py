"""JSON HTTP service exposing one analysis session.

Every response body is produced by the session's payload builders and
serialized canonically, so a CLI command writing the same payload emits
byte-identical JSON. Errors use {"code", "message"} bodies.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .contrast import ContrastRequest
from .search import SearchRequest, constrain_space, default_space
from .session import Session, to_canonical_json

DEFAULT_PORT = 8000
PORT_ENV_VAR = "RULESCOPE_PORT"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _json(payload) -> Response:
    return Response(content=to_canonical_json(payload), media_type="application/json")


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(session: Session) -> FastAPI:
    app = FastAPI(title="rulescope", docs_url=None, redoc_url=None)
    # the browser client is served separately (any static file server), so
    # cross-origin reads of this local analysis service must be allowed
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return _error(exc.status, exc.code, exc.message)

    @app.exception_handler(Exception)
    async def handle_unexpected(request: Request, exc: Exception):
        return _error(500, "internal_error", str(exc))

    def guard(fn):
        """Map domain errors onto API error bodies."""
        try:
            return fn()
        except KeyError as exc:
            raise ApiError(404, "not_found", str(exc).strip("'\"")) from exc
        except IndexError as exc:
            raise ApiError(404, "not_found", str(exc)) from exc
        except ValueError as exc:
            raise ApiError(400, "invalid_request", str(exc)) from exc

    @app.get("/models")
    def get_models():
        return _json(guard(session.models_payload))

    @app.post("/models/active")
    async def post_models_active(request: Request):
        body = await request.json()
        ids = body.get("ids")
        if not isinstance(ids, list):
            raise ApiError(400, "invalid_request", "body must carry an 'ids' list")
        guard(lambda: session.set_active([str(i) for i in ids]))
        return _json(guard(session.models_payload))

    @app.get("/importance")
    def get_importance():
        return _json(guard(session.importance_payload))

    @app.get("/rules")
    def get_rules(
        min_support: int | None = None,
        max_support: int | None = None,
        max_impurity: float | None = None,
        test_instance: int | None = None,
        decimals: int | None = None,
        clear: bool = False,
    ):
        def apply():
            if clear:
                session.set_filters(
                    min_support=None, max_support=None,
                    max_impurity=None, test_instance=None,
                )
            session.set_filters(
                min_support=min_support if min_support is not None else "keep",
                max_support=max_support if max_support is not None else "keep",
                max_impurity=max_impurity if max_impurity is not None else "keep",
                test_instance=test_instance if test_instance is not None else "keep",
                decimals=decimals,
            )
            return session.rules_payload()
        return _json(guard(apply))

    @app.get("/embedding")
    def get_embedding():
        return _json(guard(session.embedding_payload))

    @app.post("/embedding/config")
    async def post_embedding_config(request: Request):
        body = await request.json()
        allowed = {"n_neighbors", "min_dist", "seed", "dbscan_eps", "dbscan_min_pts"}
        unknown = set(body) - allowed
        if unknown:
            raise ApiError(400, "invalid_request", f"unknown settings: {sorted(unknown)}")
        guard(lambda: session.set_embedding_config(**body))
        return _json(guard(session.embedding_payload))

    @app.post("/contrast")
    async def post_contrast(request: Request):
        body = await request.json()

        def apply():
            selected = body.get("selected")
            if not isinstance(selected, list) or not selected:
                raise ValueError("body must carry a nonempty 'selected' list")
            universe = body.get("universe")
            if universe is None:
                statuses = session.rule_statuses()
                universe = [rid for rid, st in statuses.items() if st != "hidden"]
            req = ContrastRequest(
                selected=tuple(str(r) for r in selected),
                universe=tuple(str(r) for r in universe),
                bins=int(body.get("bins", 10)),
                mode=str(body.get("mode", "overlap")),
                anchored=tuple(str(r) for r in body.get("anchored", ())),
            )
            return session.contrast_payload(req)
        return _json(guard(apply))

    @app.get("/agreement/{test_index}")
    def get_agreement(test_index: int):
        payload = guard(lambda: session.agreement(test_index))
        payload["fingerprint"] = session.fingerprint()
        return _json(payload)

    @app.get("/conflicts")
    def get_conflicts():
        return _json(guard(session.conflicts_payload))

    @app.post("/export")
    async def post_export(request: Request):
        body = await request.json()
        rule_ids = body.get("rule_ids")
        if not isinstance(rule_ids, list) or not rule_ids:
            raise ApiError(400, "invalid_request", "body must carry a nonempty 'rule_ids' list")
        return _json(guard(lambda: session.export_manual_decisions([str(r) for r in rule_ids])))

    @app.post("/search")
    async def post_search(request: Request):
        body = await request.json()

        def start():
            algorithm = body.get("algorithm")
            if algorithm not in ("RF", "AB"):
                raise ValueError("algorithm must be 'RF' or 'AB'")
            space = default_space(session.train.n_features)
            constraints = body.get("constraints") or {}
            if constraints:
                space = constrain_space(
                    space, {k: (v[0], v[1]) for k, v in constraints.items()}
                )
            req = SearchRequest(
                algorithm=algorithm,
                iterations=int(body.get("iterations", 10)),
                space=space,
                seed=int(body.get("seed", session.seed + len(session.models))),
            )
            return session.start_search_job(req)
        job_id = guard(start)
        return _json({"job_id": job_id})

    @app.get("/search/{job_id}")
    def get_search(job_id: str):
        return _json(guard(lambda: session.job_status(job_id)))

    @app.get("/dataset/meta")
    def get_dataset_meta():
        return _json(guard(session.dataset_meta_payload))

    return app


def resolve_port(port: int | None = None) -> int:
    if port is not None:
        return port
    env = os.environ.get(PORT_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{PORT_ENV_VAR} must be an integer, got {env!r}") from None
    return DEFAULT_PORT


def serve(session: Session, port: int | None = None, host: str = "127.0.0.1") -> None:
    import uvicorn

    uvicorn.run(create_app(session), host=host, port=resolve_port(port), log_level="info")
