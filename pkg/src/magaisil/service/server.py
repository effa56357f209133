"""HTTP/JSON API over a running session: status, geometry, pending
judgments, metrics, and a live event stream. Also serves the dashboard's
static files when a build is present.
"""

from __future__ import annotations

import json
import os
import queue
import threading
import time
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import FileResponse, JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..world import read_task_file
from .session import JudgmentExchange, SessionConfig, SessionState, run_session

DEFAULT_PORT = 8008
PORT_ENV = "MAGAISIL_PORT"
DATA_DIR_ENV = "MAGAISIL_DATA_DIR"


class JudgmentRequest(BaseModel):
    trajectory_id: str
    accept: bool


def task_geometry(task_id: str) -> dict:
    task = read_task_file(task_id)
    c = task.corridor
    return {
        "task_id": task.task_id,
        "width": c.width,
        "goal_progress": c.goal_progress,
        "total_length": c.total_length,
        "centerline": c.centerline.tolist(),
        "left_wall": c.left_wall.tolist(),
        "right_wall": c.right_wall.tolist(),
        "obstacles": [poly.tolist() for poly in c.obstacle_polygons],
    }


def build_app(
    state: SessionState,
    exchange: JudgmentExchange | None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="magaisil session")

    @app.get("/api/status")
    def status():
        s = state.status()
        s["config"] = state.config.to_dict()
        return s

    @app.get("/api/task")
    def task():
        return task_geometry(state.config.task)

    @app.get("/api/pending")
    def pending():
        if exchange is None:
            return []
        return exchange.pending()

    @app.post("/api/judgment")
    def judgment(req: JudgmentRequest):
        if exchange is None:
            return JSONResponse(
                {"error": "session has no live judge"}, status_code=409
            )
        outcome = exchange.decide(req.trajectory_id, req.accept)
        if outcome == "ok":
            return {"recorded": True, "trajectory_id": req.trajectory_id}
        code = 404 if outcome == "unknown" else 409
        return JSONResponse(
            {"error": outcome, "trajectory_id": req.trajectory_id}, status_code=code
        )

    @app.get("/api/metrics")
    def metrics(after: int = 0):
        records, total = state.records_after(after)
        return {"records": records, "next": total}

    @app.get("/api/stream")
    def stream():
        q = state.subscribe()

        def gen():
            try:
                while True:
                    try:
                        record = q.get(timeout=15.0)
                        yield f"data: {json.dumps(record)}\n\n"
                    except queue.Empty:
                        if not state.status().get("running", False):
                            break
                        yield ": keepalive\n\n"
            finally:
                state.unsubscribe(q)

        return StreamingResponse(gen(), media_type="text/event-stream")

    if static_dir is not None and Path(static_dir).is_dir():
        index = Path(static_dir) / "index.html"
        if index.exists():

            @app.get("/")
            def root():
                return FileResponse(index)

        app.mount("/", StaticFiles(directory=str(static_dir)), name="static")

    return app


def locate_static_dir() -> Path | None:
    """The dashboard build, if one sits next to the repository."""
    for candidate in (
        Path(__file__).resolve().parents[3] / "frontend" / "dist",
        Path.cwd() / "frontend" / "dist",
    ):
        if candidate.is_dir():
            return candidate
    return None


def serve(config: SessionConfig, host: str = "127.0.0.1", port: int | None = None) -> int:
    """Run a session with the API attached; blocks until training ends."""
    import uvicorn

    if port is None:
        port = int(os.environ.get(PORT_ENV, DEFAULT_PORT))
    state = SessionState(config)
    exchange = JudgmentExchange(config.judgment_timeout) if config.judge == "human" else None
    app = build_app(state, exchange, static_dir=locate_static_dir())

    result_box: dict = {}

    def work():
        result_box["result"] = run_session(config, state=state, exchange=exchange)

    worker = threading.Thread(target=work, daemon=True)

    server = uvicorn.Server(
        uvicorn.Config(app, host=host, port=port, log_level="warning")
    )

    def watch():
        worker.join()
        time.sleep(2.0)  # let clients pick up the final state
        server.should_exit = True

    @app.on_event("startup")
    def _start_worker():
        worker.start()
        threading.Thread(target=watch, daemon=True).start()

    server.run()
    worker.join(timeout=5.0)
    result = result_box.get("result")
    if result is None or result.fault:
        return 2
    return 0
