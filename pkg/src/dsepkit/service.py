"""Stateless JSON-over-HTTP facade.

Every request carries the whole graph (DSL text or a structured node/edge
list) — there are no server-side documents, so any request order under any
concurrency yields the same responses. Responses reuse the same payload
builders as the CLI's ``--json`` mode, which keeps the two front ends
field-for-field identical.

Status mapping: 400 malformed body or unparseable graph (with diagnostics),
413 body over 1 MiB, 422 analytic precondition failures (latent in a
conditioning set, unknown node, …), 429 simulation budget exceeded.
"""

from __future__ import annotations

import json
import os
import threading
import time
from typing import Any, Union

import click
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import adjust as adj
from .dsl import DagDocument, DslParseError, parse, serialize
from .engine import DEFAULT_PATH_CAP, d_separated
from .errors import DsepError
from .graph import Dag, NodeAttrs
from .jsonio import (
    adjustment_check_payload,
    adjustment_sets_payload,
    coin_payload,
    dsep_payload,
    iv_check_payload,
    iv_search_payload,
    parse_payload,
    paths_payload,
    simulate_payload,
    transport_payload,
)
from .sem import cross_validate

MAX_BODY_BYTES = 1 << 20
DEFAULT_BIND = ("127.0.0.1", 8742)
DEFAULT_SIM_MAX_N = 10**6
DEFAULT_SIM_CONCURRENCY = 4


class StructuredNode(BaseModel):
    name: str
    latent: bool = False
    selected: bool = False
    pos: tuple[float, float] | None = None


class StructuredEdge(BaseModel):
    tail: str
    head: str


class StructuredGraph(BaseModel):
    nodes: list[StructuredNode]
    edges: list[StructuredEdge]


GraphInput = Union[str, StructuredGraph]


class ParseRequest(BaseModel):
    dag: GraphInput


class PathsRequest(BaseModel):
    dag: GraphInput
    from_: str = Field(alias="from")
    to: str
    adjust: list[str] = []

    model_config = {"populate_by_name": True}


class DsepRequest(BaseModel):
    dag: GraphInput
    a: str
    b: str
    given: list[str] = []


class AdjustmentCheckRequest(BaseModel):
    dag: GraphInput
    exposure: str
    outcome: str
    through: list[str] = []
    set_: list[str] = Field(default=[], alias="set")

    model_config = {"populate_by_name": True}


class AdjustmentSetsRequest(BaseModel):
    dag: GraphInput
    exposure: str
    outcome: str
    through: list[str] = []


class IvCheckRequest(BaseModel):
    dag: GraphInput
    candidate: str
    exposure: str
    outcome: str
    set_: list[str] = Field(default=[], alias="set")

    model_config = {"populate_by_name": True}


class IvSearchRequest(BaseModel):
    dag: GraphInput
    exposure: str
    outcome: str


class TransportRequest(BaseModel):
    dag: GraphInput
    selection: str
    outcome: str
    given: list[str] = []


class SimulateRequest(BaseModel):
    dag: GraphInput | None = None
    coin: bool = False
    n: int = Field(default=10000, ge=1)
    seeds: list[int] = [0]
    alpha: float = Field(default=0.01, gt=0.0)


class _BadGraph(Exception):
    def __init__(self, payload: dict[str, Any]):
        self.payload = payload
        super().__init__(payload.get("message", "bad graph"))


def _error_body(code: str, message: str, diagnostics: list | None = None) -> dict:
    error: dict[str, Any] = {"code": code, "message": message}
    if diagnostics is not None:
        error["diagnostics"] = diagnostics
    return {"error": error}


def _build_dag(graph: GraphInput) -> Dag:
    if isinstance(graph, str):
        doc = parse(graph)  # DslParseError propagates to its handler
        return doc.dag
    try:
        nodes = {n.name: NodeAttrs(latent=n.latent, selected=n.selected, pos=n.pos)
                 for n in graph.nodes}
        return Dag(nodes, [(e.tail, e.head) for e in graph.edges])
    except DsepError as exc:
        raise _BadGraph(_error_body(exc.code, str(exc))) from exc


def create_app(path_cap: int | None = None, cors: bool = True,
               sim_max_n: int = DEFAULT_SIM_MAX_N,
               sim_concurrency: int = DEFAULT_SIM_CONCURRENCY) -> FastAPI:
    if path_cap is None:
        path_cap = int(os.environ.get("DSEP_PATH_CAP", DEFAULT_PATH_CAP))
    app = FastAPI(title="dsepkit service", version="1.0.0",
                  docs_url=None, redoc_url=None)
    sim_slots = threading.Semaphore(sim_concurrency)

    if cors:
        app.add_middleware(CORSMiddleware, allow_origins=["*"],
                           allow_methods=["*"], allow_headers=["*"])

    @app.middleware("http")
    async def guard_and_log(request: Request, call_next):
        started = time.monotonic()
        length = request.headers.get("content-length")
        if length is not None and int(length) > MAX_BODY_BYTES:
            response = JSONResponse(status_code=413, content=_error_body(
                "E_TOO_LARGE", f"request body exceeds {MAX_BODY_BYTES} bytes"))
        else:
            response = await call_next(request)
        print(json.dumps({
            "method": request.method,
            "path": request.url.path,
            "status": response.status_code,
            "ms": round((time.monotonic() - started) * 1000, 3),
        }), flush=True)
        return response

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content=_error_body(
            "E_VALIDATION", "request body failed validation",
            diagnostics=[{"line": 0, "column": 0, "severity": "error",
                          "code": "E_VALIDATION",
                          "message": "; ".join(str(e["msg"]) for e in exc.errors())}]))

    @app.exception_handler(DslParseError)
    async def on_parse_error(request: Request, exc: DslParseError):
        diags = [{"line": d.line, "column": d.column, "severity": d.severity,
                  "code": d.code, "message": d.message} for d in exc.diagnostics]
        first = exc.diagnostics[0]
        return JSONResponse(status_code=400, content=_error_body(
            first.code, str(exc), diagnostics=diags))

    @app.exception_handler(_BadGraph)
    async def on_bad_graph(request: Request, exc: _BadGraph):
        return JSONResponse(status_code=400, content=exc.payload)

    @app.exception_handler(DsepError)
    async def on_analytic_error(request: Request, exc: DsepError):
        return JSONResponse(status_code=422,
                            content=_error_body(exc.code, str(exc)))

    @app.get("/api/v1/schema")
    def schema() -> dict:
        return app.openapi()

    @app.post("/api/v1/parse")
    def parse_endpoint(req: ParseRequest) -> dict:
        if isinstance(req.dag, str):
            return parse_payload(parse(req.dag))
        dag = _build_dag(req.dag)
        return parse_payload(DagDocument(source=serialize(dag), dag=dag))

    @app.post("/api/v1/paths")
    def paths_endpoint(req: PathsRequest) -> dict:
        dag = _build_dag(req.dag)
        return paths_payload(d_separated(dag, req.from_, req.to, req.adjust,
                                         cap=path_cap))

    @app.post("/api/v1/dsep")
    def dsep_endpoint(req: DsepRequest) -> dict:
        dag = _build_dag(req.dag)
        return dsep_payload(d_separated(dag, req.a, req.b, req.given, cap=path_cap))

    @app.post("/api/v1/adjustment/check")
    def adjustment_check(req: AdjustmentCheckRequest) -> dict:
        dag = _build_dag(req.dag)
        query = adj.EffectQuery(req.exposure, req.outcome, frozenset(req.through))
        verdict = adj.check_adjustment_set(dag, query, req.set_, cap=path_cap)
        return adjustment_check_payload(verdict, req.exposure, req.outcome,
                                        query.through, frozenset(req.set_))

    @app.post("/api/v1/adjustment/sets")
    def adjustment_sets(req: AdjustmentSetsRequest) -> dict:
        dag = _build_dag(req.dag)
        query = adj.EffectQuery(req.exposure, req.outcome, frozenset(req.through))
        sets = adj.enumerate_valid_sets(dag, query, cap=path_cap)
        return adjustment_sets_payload(sets, req.exposure, req.outcome, query.through)

    @app.post("/api/v1/iv/check")
    def iv_check_endpoint(req: IvCheckRequest) -> dict:
        dag = _build_dag(req.dag)
        verdict = adj.iv_check(dag, req.candidate, req.exposure, req.outcome,
                               req.set_, cap=path_cap)
        return iv_check_payload(verdict)

    @app.post("/api/v1/iv/search")
    def iv_search_endpoint(req: IvSearchRequest) -> dict:
        dag = _build_dag(req.dag)
        results = adj.iv_search(dag, req.exposure, req.outcome, cap=path_cap)
        return iv_search_payload(results, req.exposure, req.outcome)

    @app.post("/api/v1/transport")
    def transport_endpoint(req: TransportRequest) -> dict:
        dag = _build_dag(req.dag)
        advisory = adj.transportability_check(dag, req.selection, req.outcome,
                                              req.given, cap=path_cap)
        return transport_payload(advisory)

    @app.post("/api/v1/simulate")
    def simulate_endpoint(req: SimulateRequest):
        if req.coin:
            return coin_payload()
        if req.dag is None:
            return JSONResponse(status_code=400, content=_error_body(
                "E_VALIDATION", "either 'coin': true or a 'dag' is required"))
        if req.n > sim_max_n:
            return JSONResponse(status_code=429, content=_error_body(
                "E_SIM_BUDGET", f"n exceeds the per-request budget of {sim_max_n}"))
        if not sim_slots.acquire(blocking=False):
            return JSONResponse(status_code=429, content=_error_body(
                "E_BUSY", "too many concurrent simulations; retry shortly"))
        try:
            dag = _build_dag(req.dag)
            return simulate_payload(cross_validate(dag, req.seeds, req.n, req.alpha))
        finally:
            sim_slots.release()

    return app


@click.command()
@click.option("--host", default=DEFAULT_BIND[0], show_default=True)
@click.option("--port", default=DEFAULT_BIND[1], show_default=True, type=int)
@click.option("--path-cap", default=None, type=int,
              help="Override the path-enumeration cap (or set DSEP_PATH_CAP).")
@click.option("--no-cors", is_flag=True, help="Disable permissive CORS headers.")
@click.option("--sim-max-n", default=DEFAULT_SIM_MAX_N, show_default=True, type=int)
@click.option("--sim-concurrency", default=DEFAULT_SIM_CONCURRENCY,
              show_default=True, type=int)
def main(host: str, port: int, path_cap: int | None, no_cors: bool,
         sim_max_n: int, sim_concurrency: int) -> None:
    """Serve the analysis API over HTTP."""
    import uvicorn

    app = create_app(path_cap=path_cap, cors=not no_cors,
                     sim_max_n=sim_max_n, sim_concurrency=sim_concurrency)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
