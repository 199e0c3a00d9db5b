"""JSON-over-HTTP service: the server half of the exploration loop.

Serves the data bundle's graph, accepts mining jobs (community or EMM
engine), reports their status and exposes induced member subgraphs for
visualization. Jobs run on a bounded FIFO worker pool; artifacts are
written with the same canonical serializer as the CLI, so a service run
and a CLI run with identical parameters produce identical bytes.
"""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import io as sio
from .communities import Pattern
from .errors import SinetError, ValidationError
from .runner import ENGINES, communities_params, emm_params, run_communities, run_emm

GRAPH_FILE = "graph.csv"
ATTRIBUTES_FILE = "attributes.csv"
EMM_FILE = "emm.csv"


@dataclass
class RunState:
    engine: str
    parameters: dict
    status: str = "running"  # running | done | failed
    artifact: dict | None = None
    error: str | None = None


@dataclass
class ServiceState:
    data_dir: Path
    graph: object = None
    attributes: object = None
    runs: dict[str, RunState] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def create_app(data_dir: Path, workers: int = 2, ui_dir: Path | None = None) -> FastAPI:
    data_dir = Path(data_dir)
    graph_path = data_dir / GRAPH_FILE
    attributes_path = data_dir / ATTRIBUTES_FILE
    for required in (graph_path, attributes_path):
        if not required.exists():
            raise ValidationError(f"data directory misses {required.name}")
    state = ServiceState(
        data_dir=data_dir,
        graph=sio.read_graph(graph_path),
        attributes=sio.read_attributes(attributes_path),
    )
    (data_dir / "runs").mkdir(exist_ok=True)
    executor = ThreadPoolExecutor(max_workers=max(1, workers))
    app = FastAPI(title="sinet service")

    def execute(run_id: str) -> None:
        with state.lock:
            run = state.runs[run_id]
            run.status = "running"
        try:
            if run.engine == "communities":
                artifact = run_communities(state.graph, state.attributes, run.parameters)
            else:
                emm_path = data_dir / EMM_FILE
                if not emm_path.exists():
                    raise ValidationError(f"data directory misses {EMM_FILE}")
                instances = sio.read_instances(
                    emm_path, run.parameters.get("targets", [])
                )
                artifact = run_emm(instances, run.parameters)
            sio.write_json_artifact(data_dir / "runs" / f"{run_id}.json", artifact)
            with state.lock:
                run.artifact = artifact
                run.status = "done"
        except Exception as e:  # failures must land in the run state
            with state.lock:
                run.error = str(e)
                run.status = "failed"

    @app.get("/api/graph")
    def get_graph():
        graph = state.graph
        attributes = state.attributes
        summary: dict[str, dict[str, int]] = {}
        for actor in graph.nodes:
            for attr, value in attributes.selectors(actor):
                summary.setdefault(attr, {}).setdefault(value, 0)
                summary[attr][value] += 1
        return {
            "format_version": sio.FORMAT_VERSION,
            "nodes": [
                {
                    "id": a,
                    "selectors": [list(s) for s in sorted(attributes.selectors(a))],
                }
                for a in sorted(graph.nodes)
            ],
            "edges": [
                {"source": a, "target": b, "weight": w}
                for (a, b), w in sorted(graph.edges.items())
            ],
            "attribute_summary": summary,
        }

    @app.post("/api/mine")
    async def post_mine(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        if not isinstance(body, dict):
            return _error(400, "request body must be a JSON object")
        engine = body.get("engine")
        parameters = body.get("parameters", {})
        if engine not in ENGINES:
            return _error(400, f"unknown engine {engine!r}; known: {sorted(ENGINES)}")
        if not isinstance(parameters, dict):
            return _error(400, "parameters must be a JSON object")
        try:
            normalized = (
                communities_params(parameters)
                if engine == "communities"
                else emm_params(parameters)
            )
        except (SinetError, ValueError) as e:
            return _error(400, str(e))
        run_id = uuid.uuid4().hex
        with state.lock:
            state.runs[run_id] = RunState(engine=engine, parameters=normalized)
        executor.submit(execute, run_id)
        return {"run_id": run_id}

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        with state.lock:
            run = state.runs.get(run_id)
            if run is None:
                return _error(404, f"unknown run {run_id!r}")
            payload = {"run_id": run_id, "status": run.status,
                       "engine": run.engine, "parameters": run.parameters}
            if run.status == "done" and run.artifact is not None:
                payload["patterns"] = run.artifact["patterns"]
            if run.status == "failed":
                payload["error"] = run.error
            return payload

    @app.get("/api/patterns/{run_id}/{index}/members")
    def get_members(run_id: str, index: int):
        with state.lock:
            run = state.runs.get(run_id)
            if run is None:
                return _error(404, f"unknown run {run_id!r}")
            if run.status != "done" or run.artifact is None:
                return _error(404, f"run {run_id!r} has no results (status {run.status})")
            patterns = run.artifact["patterns"]
            if not 0 <= index < len(patterns):
                return _error(404, f"pattern index {index} out of range")
            entry = patterns[index]
        graph = state.graph
        attributes = state.attributes
        if "members" in entry:
            members = set(entry["members"])
        else:
            pattern = Pattern(tuple(tuple(s) for s in entry["selectors"]))
            members = {
                a for a in graph.nodes if pattern.matches(attributes.selectors(a))
            }
        neighborhood = set(members)
        for actor in members:
            neighborhood.update(graph.neighbors(actor))
        nodes = [
            {
                "id": a,
                "member": a in members,
                "selectors": [list(s) for s in sorted(attributes.selectors(a))],
            }
            for a in sorted(neighborhood)
        ]
        edges = [
            {"source": a, "target": b, "weight": w}
            for (a, b), w in sorted(graph.edges.items())
            if a in neighborhood and b in neighborhood
        ]
        return {
            "selectors": entry["selectors"],
            "members": sorted(members),
            "nodes": nodes,
            "edges": edges,
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        ui_dir = Path(ui_dir)
        if not (ui_dir / "index.html").exists():
            raise ValidationError(f"ui directory misses index.html: {ui_dir}")
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
