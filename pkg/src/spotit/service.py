"""HTTP+JSON service around game sessions, with log-based persistence.

Each game is persisted as one JSON-lines file: a header with the creation
parameters followed by one line per accepted action.  The log is the
source of truth; replaying it recreates the exact state, byte for byte,
because responses are serialized canonically (sorted keys).
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .grid import image_positions
from .session import (
    GameState,
    Hint,
    ProgressReport,
    SessionError,
    apply_player_action,
    check,
    hint,
    new_game,
)


class SessionStore:
    """In-memory sessions with optional on-disk action logs."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        if self.path is not None:
            self.path.mkdir(parents=True, exist_ok=True)
        self._states: dict[str, GameState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry = threading.Lock()

    def _lock_for(self, game_id: str) -> threading.Lock:
        with self._registry:
            return self._locks.setdefault(game_id, threading.Lock())

    def _log_file(self, game_id: str) -> Path | None:
        return self.path / f"{game_id}.jsonl" if self.path is not None else None

    def create(self, order: int, seed: int, missing: int) -> GameState:
        game_id = uuid.uuid4().hex
        state = new_game(order, seed, missing, game_id=game_id)
        with self._lock_for(game_id):
            self._states[game_id] = state
            log = self._log_file(game_id)
            if log is not None:
                with log.open("w", encoding="utf-8") as fh:
                    fh.write(json.dumps(
                        {"game_id": game_id, "order": order, "seed": seed,
                         "missing": missing}, sort_keys=True) + "\n")
        return state

    def get(self, game_id: str) -> GameState:
        with self._lock_for(game_id):
            state = self._states.get(game_id)
            if state is None:
                state = self._replay(game_id)
                self._states[game_id] = state
            return state

    def act(self, game_id: str, action: dict) -> GameState:
        with self._lock_for(game_id):
            state = self._states.get(game_id)
            if state is None:
                state = self._replay(game_id)
            new_state = apply_player_action(state, action)
            self._states[game_id] = new_state
            log = self._log_file(game_id)
            if log is not None:
                with log.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps({"action": action}, sort_keys=True) + "\n")
            return new_state

    def _replay(self, game_id: str) -> GameState:
        log = self._log_file(game_id)
        if log is None or not log.exists():
            raise SessionError("unknown_game", f"no game with id {game_id}", 404)
        with log.open(encoding="utf-8") as fh:
            lines = [json.loads(line) for line in fh if line.strip()]
        if not lines:
            raise SessionError("unknown_game", f"empty log for game {game_id}", 404)
        head = lines[0]
        state = new_game(head["order"], head["seed"], head["missing"],
                         game_id=head["game_id"])
        for entry in lines[1:]:
            state = apply_player_action(state, entry["action"])
        return state


def state_payload(state: GameState) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "game_id": state.game_id,
        "order": state.order.n,
        "seed": state.seed,
        "missing": state.missing,
        "phase": state.phase.value,
        "guided": state.guided,
        "infinity_image": state.infinity_image,
        "axes": None,
        "grid": None,
        "image_positions": None,
        "history": [m.to_dict() for m in state.history],
        "deck": {
            "order": state.order.n,
            "cards": [{"id": c.id, "images": c.sorted_images()} for c in state.deck.cards],
            "image_names": (
                {str(i): name for i, name in sorted(state.deck.image_names.items())}
                if state.deck.image_names else None),
        },
    }
    if state.axes is not None:
        payload["axes"] = {"row_card": state.axes.row_card.id,
                           "col_card": state.axes.col_card.id}
    if state.grid is not None:
        grid = state.grid
        payload["grid"] = [
            [{"card": cell.id, "images": cell.sorted_images()} for cell in row]
            for row in grid.cells
        ]
        imgs = sorted({i for row in grid.cells for cell in row for i in cell.images})
        payload["image_positions"] = {
            str(img): [[r, c] for r, c in image_positions(grid, img)] for img in imgs
        }
    return payload


def hint_payload(h: Hint) -> dict[str, Any]:
    return {
        "stage": h.stage,
        "narration": h.narration,
        "move": h.move.to_dict() if h.move else None,
        "highlight_image": h.highlight_image,
    }


def check_payload(report: ProgressReport) -> dict[str, Any]:
    return {
        "rows": list(report.rows),
        "cols": list(report.cols),
        "diagonal": report.diagonal,
        "counterdiagonal": report.counterdiagonal,
        "violations": report.violations,
        "pairing": [list(p) for p in report.pairing.pairs] if report.pairing else None,
        "solved": report.solved,
    }


def _canonical(data: Any, status: int = 200) -> Response:
    return Response(
        content=json.dumps(data, sort_keys=True, separators=(",", ":")),
        status_code=status,
        media_type="application/json",
    )


def _error(code: str, message: str, status: int) -> Response:
    return _canonical({"code": code, "message": message}, status)


def create_app(store: SessionStore | None = None,
               cors_origins: list[str] | None = None) -> FastAPI:
    store = store if store is not None else SessionStore()
    app = FastAPI(title="spotit session service")
    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(SessionError)
    async def _session_error(_req: Request, exc: SessionError) -> Response:
        return _error(exc.code, exc.message, exc.status)

    @app.get("/healthz")
    async def healthz() -> Response:
        return _canonical({"status": "ok"})

    @app.post("/games")
    async def create_game(request: Request) -> Response:
        body = await _json_body(request)
        order = body.get("order")
        seed = body.get("seed")
        missing = body.get("missing", 0)
        if not isinstance(order, int) or not isinstance(seed, int) or not isinstance(missing, int):
            return _error("bad_request", "order, seed and missing must be integers", 400)
        try:
            state = store.create(order, seed, missing)
        except ValueError as e:
            return _error("bad_order", str(e), 400)
        return _canonical({"game_id": state.game_id, "state": state_payload(state)}, 201)

    @app.get("/games/{game_id}")
    async def get_game(game_id: str) -> Response:
        return _canonical(state_payload(store.get(game_id)))

    @app.post("/games/{game_id}/actions")
    async def post_action(game_id: str, request: Request) -> Response:
        body = await _json_body(request)
        action = body.get("action")
        if not isinstance(action, dict):
            return _error("bad_request", "body must be {\"action\": {...}}", 400)
        return _canonical(state_payload(store.act(game_id, action)))

    @app.get("/games/{game_id}/hint")
    async def get_hint(game_id: str) -> Response:
        return _canonical(hint_payload(hint(store.get(game_id))))

    @app.get("/games/{game_id}/check")
    async def get_check(game_id: str) -> Response:
        return _canonical(check_payload(check(store.get(game_id))))

    return app


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise SessionError("bad_request", "body is not valid JSON", 400) from None
    if not isinstance(body, dict):
        raise SessionError("bad_request", "body must be a JSON object", 400)
    return body


def serve(addr: str, store_path: str | None, cors_origins: list[str] | None = None) -> None:
    """Run the service with uvicorn; addr is host:port."""
    import uvicorn

    host, _, port = addr.rpartition(":")
    app = create_app(SessionStore(store_path), cors_origins)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="info")
