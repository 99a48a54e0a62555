"""HTTP delivery of compiled tasks, playlists, screens and sessions.

Read endpoints are pure functions of the compiled task set and serialize
canonically (sorted keys), so identical compilations serve byte-identical
bodies. Sessions are the only mutable state: an in-memory step pointer per
session, guarded by a lock, navigable with previous/next/home.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from fastapi import FastAPI, Request, Response

from . import __version__
from .resolver import CompiledStep, CompiledTask, Playlist, ResolvedStep
from .screens import screens_for_task, task_card


def canonical_json(payload) -> bytes:
    return (json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n").encode("utf-8")


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(content=canonical_json(payload), status_code=status_code,
                    media_type="application/json")


def _error(status_code: int, message: str) -> Response:
    return _json_response({"error": message}, status_code)


def join_asset(base: str, uri: str) -> str:
    if not base or "://" in uri or uri.startswith("/"):
        return uri
    return base.rstrip("/") + "/" + uri


def load_compiled_dir(directory: str | Path) -> dict[str, CompiledTask]:
    """Read every compiled task JSON in a directory, keyed by task id."""
    out: dict[str, CompiledTask] = {}
    for path in sorted(Path(directory).glob("*.json")):
        doc = json.loads(path.read_text(encoding="utf-8"))
        out[doc["task"]["task_id"]] = _compiled_from_dict(doc)
    return out


def _compiled_from_dict(doc: dict) -> CompiledTask:
    from .gloss import GlossSequence, Provenance, classify
    from .resolver import ResolutionKind, ResolvedGloss
    from .tasks import _parse_task

    task = _parse_task(doc["task"])
    steps = []
    for raw in doc["steps"]:
        seq = None
        resolved = None
        playlist = None
        if raw.get("provenance"):
            seq = GlossSequence(
                step_index=raw["index"],
                glosses=tuple(classify(t) for t in raw["glosses"]),
                provenance=Provenance(raw["provenance"]))
        if raw.get("resolutions"):
            items = tuple(
                ResolvedGloss(
                    gloss=classify(r["token"]),
                    kind=ResolutionKind(r["kind"]),
                    uris=tuple(r["uris"]),
                    parts=tuple(r["parts"]) if r.get("parts") is not None else None,
                    substitute=r.get("substitute"),
                    reason=r.get("reason"))
                for r in raw["resolutions"])
            resolved = ResolvedStep(step_index=raw["index"], items=items)
        if raw.get("playlist"):
            playlist = Playlist(
                step_index=raw["playlist"]["step_index"],
                segments=tuple(raw["playlist"]["segments"]),
                boundaries=tuple((b["token"], b["start"], b["end"])
                                 for b in raw["playlist"]["boundaries"]))
        steps.append(CompiledStep(index=raw["index"], text=raw["text"], image=raw.get("image"),
                                  sequence=seq, resolved=resolved, playlist=playlist,
                                  error=raw.get("error")))
    return CompiledTask(task=task, translator=doc["translator"], steps=tuple(steps))


@dataclass
class SessionStore:
    sessions: dict[str, dict] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def create(self, task_id: str, step_count: int) -> dict:
        state = {
            "session_id": uuid.uuid4().hex,
            "task_id": task_id,
            "current_step": 0,
            "step_count": step_count,
            "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        with self.lock:
            self.sessions[state["session_id"]] = state
        return dict(state)

    def navigate(self, session_id: str, direction: str) -> tuple[dict | None, bool]:
        """Returns (state, moved); state None for unknown session."""
        with self.lock:
            state = self.sessions.get(session_id)
            if state is None:
                return None, False
            step = state["current_step"]
            if direction == "next":
                target = step + 1
            elif direction == "previous":
                target = step - 1
            else:  # home
                target = 0
            if not 0 <= target < state["step_count"]:
                return dict(state), False
            state["current_step"] = target
            return dict(state), True


def create_app(compiled: Mapping[str, CompiledTask],
               asset_base: str = "",
               ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="signpipe", version=__version__)
    store = SessionStore()
    tasks = dict(sorted(compiled.items()))
    cards = [task_card(t) for _, t in sorted(tasks.items())]

    def absolutize(playlist: dict) -> dict:
        out = dict(playlist)
        out["segments"] = [join_asset(asset_base, uri) for uri in playlist["segments"]]
        return out

    @app.get("/health")
    def health() -> Response:
        return _json_response({"status": "ok", "version": __version__, "tasks": len(tasks)})

    @app.get("/tasks")
    def list_tasks() -> Response:
        return _json_response([c.to_dict() for c in cards])

    @app.get("/tasks/{task_id}")
    def get_task(task_id: str) -> Response:
        compiled_task = tasks.get(task_id)
        if compiled_task is None:
            return _error(404, f"unknown task {task_id!r}")
        return _json_response(compiled_task.task.to_dict())

    @app.get("/tasks/{task_id}/screens")
    def get_screens(task_id: str) -> Response:
        compiled_task = tasks.get(task_id)
        if compiled_task is None:
            return _error(404, f"unknown task {task_id!r}")
        screens = screens_for_task(compiled_task, catalog=cards)
        for screen in screens:
            if screen.get("playlist"):
                screen["playlist"] = absolutize(screen["playlist"])
        return _json_response(screens)

    @app.get("/tasks/{task_id}/steps/{step_index}/playlist")
    def get_playlist(task_id: str, step_index: int) -> Response:
        compiled_task = tasks.get(task_id)
        if compiled_task is None:
            return _error(404, f"unknown task {task_id!r}")
        if not 0 <= step_index < len(compiled_task.steps):
            return _error(404, f"task {task_id!r} has no step {step_index}")
        step = compiled_task.steps[step_index]
        if step.playlist is None:
            return _error(404, f"step {step_index} of {task_id!r} has no playlist")
        return _json_response(absolutize(step.playlist.to_dict()))

    async def _read_body(request: Request) -> dict | None:
        try:
            body = json.loads(await request.body() or b"{}")
        except json.JSONDecodeError:
            return None
        return body if isinstance(body, dict) else None

    @app.post("/sessions")
    async def create_session(request: Request) -> Response:
        body = await _read_body(request)
        if body is None or not isinstance(body.get("task_id"), str):
            return _error(400, "body must be a JSON object with a task_id string")
        compiled_task = tasks.get(body["task_id"])
        if compiled_task is None:
            return _error(404, f"unknown task {body['task_id']!r}")
        return _json_response(store.create(body["task_id"], len(compiled_task.steps)), 201)

    @app.post("/sessions/{session_id}/navigate")
    async def navigate(session_id: str, request: Request) -> Response:
        body = await _read_body(request)
        direction = (body or {}).get("direction")
        if direction not in ("next", "previous", "home"):
            return _error(400, "direction must be one of next, previous, home")
        state, moved = store.navigate(session_id, direction)
        if state is None:
            return _error(404, f"unknown session {session_id!r}")
        if not moved and direction != "home":
            return _json_response({"error": "navigation out of bounds", **state}, 409)
        return _json_response(state)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
