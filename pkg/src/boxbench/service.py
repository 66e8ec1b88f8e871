"""HTTP session API over the protocol engine.

JSON over HTTP: create a session, spend exploration queries, submit
evaluation answers, read the catalog.  Session responses never carry the
environment id or any hidden state; the catalog endpoint exposes only
public spec fields.  The store is in-memory with optional file-backed
persistence (a replayable JSON snapshot written on every mutation:
sessions are rebuilt by deterministic replay on load).
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, Header, HTTPException
from fastapi.responses import JSONResponse

from .errors import BudgetError, NotFound, UnsupportedFeedbackMode
from .protocol import FeedbackMode, Session, Stage, TurnBudget
from .registry import list_environments

DEFAULT_TTL_SECONDS = 24 * 3600


@dataclass
class StoredSession:
    session: Session
    owner_token: str
    created_at: float
    expires_at: float
    lock: threading.Lock = field(default_factory=threading.Lock)
    submissions: list[list] = field(default_factory=list)  # [stage, text]

    def expired(self, now: Optional[float] = None) -> bool:
        return (now or time.time()) > self.expires_at


class SessionStore:
    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS,
                 persist_path: Optional[Path] = None):
        self.ttl = ttl_seconds
        self.persist_path = Path(persist_path) if persist_path else None
        self._sessions: dict[str, StoredSession] = {}
        self._lock = threading.Lock()
        if self.persist_path and self.persist_path.exists():
            self._load()

    # -- lifecycle -----------------------------------------------------------
    def create(self, env_id: str, budget: TurnBudget, seed: int,
               session_id: Optional[str] = None,
               owner_token: Optional[str] = None,
               created_at: Optional[float] = None) -> tuple[str, StoredSession]:
        session = Session(env_id, budget, seed)
        now = created_at if created_at is not None else time.time()
        stored = StoredSession(
            session=session,
            owner_token=owner_token or uuid.uuid4().hex,
            created_at=now,
            expires_at=now + self.ttl,
        )
        sid = session_id or uuid.uuid4().hex
        with self._lock:
            self._sessions[sid] = stored
        self._persist()
        return sid, stored

    def get(self, session_id: str) -> StoredSession:
        with self._lock:
            stored = self._sessions.get(session_id)
        if stored is None:
            raise HTTPException(404, "unknown session id")
        if stored.expired():
            raise HTTPException(410, "session expired")
        return stored

    def record_submission(self, stored: StoredSession, stage: Stage,
                          text: str) -> None:
        stored.submissions.append([stage.value, text])
        self._persist()

    # -- persistence ------------------------------------------------------------
    def _persist(self) -> None:
        if self.persist_path is None:
            return
        with self._lock:
            snapshot = {
                sid: {
                    "env_id": s.session.env_id,
                    "seed": s.session.seed,
                    "budget": s.session.budget.to_dict(),
                    "owner_token": s.owner_token,
                    "created_at": s.created_at,
                    "submissions": s.submissions,
                }
                for sid, s in self._sessions.items()
            }
        self.persist_path.write_text(json.dumps(snapshot, indent=2))

    def _load(self) -> None:
        snapshot = json.loads(self.persist_path.read_text())
        for sid, data in snapshot.items():
            budget = TurnBudget(
                data["budget"]["exploration_turns"],
                data["budget"]["shots_per_sample"],
                FeedbackMode(data["budget"]["feedback_mode"]),
            )
            _, stored = self.create(
                data["env_id"], budget, data["seed"],
                session_id=sid,
                owner_token=data["owner_token"],
                created_at=data["created_at"],
            )
            for stage, text in data["submissions"]:
                if stage == Stage.EXPLORATION.value:
                    stored.session.submit_exploration(text)
                else:
                    stored.session.submit_answer(text)
                stored.submissions.append([stage, text])
        # Re-persist once at the end: the per-create snapshots above were
        # written before the submissions were replayed.
        self._persist()


def _session_view(stored: StoredSession) -> dict:
    """Read-only snapshot; excludes the environment id and all hidden truths."""
    session = stored.session
    return {
        "stage": session.stage.value,
        "turns_remaining": session.turns_remaining(),
        "sample_index": session.sample_index,
        "test_count": session.test_count,
        "exchanges": [r.to_dict() for r in session.history],
        "verdicts": [v.to_dict() for v in session.verdicts],
        "created_at": stored.created_at,
        "expires_at": stored.expires_at,
    }


def _parse_budget(raw) -> TurnBudget:
    if isinstance(raw, str):
        return TurnBudget.parse(raw)
    if isinstance(raw, dict):
        mode = FeedbackMode(raw.get("feedback_mode", "Instant"))
        return TurnBudget(
            int(raw.get("exploration_turns", 0)),
            int(raw.get("shots_per_sample", 0)),
            mode,
        )
    raise BudgetError("budget must be 'T@s' or an object")


def create_app(store: Optional[SessionStore] = None) -> FastAPI:
    from fastapi.exceptions import RequestValidationError

    app = FastAPI(title="boxbench session service")
    app.state.store = store or SessionStore()

    @app.exception_handler(RequestValidationError)
    async def bad_body(request, exc):
        return JSONResponse(status_code=400, content={"detail": "invalid request body"})

    def require_owner(stored: StoredSession, authorization: Optional[str]):
        expected = f"Bearer {stored.owner_token}"
        if authorization != expected:
            raise HTTPException(401, "missing or wrong owner token")

    @app.get("/envs")
    def catalog(family: Optional[str] = None, difficulty: Optional[str] = None):
        return [s.public_dict() for s in list_environments(family, difficulty)]

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        env_id = payload.get("env_id")
        if not isinstance(env_id, str):
            raise HTTPException(400, "env_id is required")
        try:
            budget = _parse_budget(payload.get("budget"))
            seed = int(payload.get("seed", 0))
            sid, stored = app.state.store.create(env_id, budget, seed)
        except (BudgetError, UnsupportedFeedbackMode, ValueError, TypeError) as err:
            raise HTTPException(400, str(err))
        except NotFound as err:
            raise HTTPException(404, str(err))
        return JSONResponse(
            status_code=201,
            content={
                "session_id": sid,
                "owner_token": stored.owner_token,
                "preamble": stored.session.preamble,
                "stage": stored.session.stage.value,
                "turns_remaining": stored.session.turns_remaining(),
                "test_count": stored.session.test_count,
            },
        )

    @app.post("/sessions/{session_id}/query")
    def step(session_id: str, payload: dict = Body(...),
             authorization: Optional[str] = Header(default=None)):
        stored = app.state.store.get(session_id)
        require_owner(stored, authorization)
        text = payload.get("text")
        if not isinstance(text, str):
            raise HTTPException(400, "text is required")
        with stored.lock:
            session = stored.session
            if session.stage is not Stage.EXPLORATION:
                raise HTTPException(
                    409, f"session is in stage {session.stage.value}"
                )
            feedback = session.submit_exploration(text)
            app.state.store.record_submission(stored, Stage.EXPLORATION, text)
            return {
                "feedback": feedback,
                "stage": session.stage.value,
                "turns_remaining": session.turns_remaining(),
            }

    @app.post("/sessions/{session_id}/answer")
    def answer(session_id: str, payload: dict = Body(...),
               authorization: Optional[str] = Header(default=None)):
        stored = app.state.store.get(session_id)
        require_owner(stored, authorization)
        text = payload.get("text")
        if not isinstance(text, str):
            raise HTTPException(400, "text is required")
        with stored.lock:
            session = stored.session
            if session.stage is not Stage.EVALUATION:
                raise HTTPException(
                    409, f"session is in stage {session.stage.value}"
                )
            verdict, feedback = session.submit_answer(text)
            app.state.store.record_submission(stored, Stage.EVALUATION, text)
            body = {
                "feedback": feedback,
                "stage": session.stage.value,
                "retry": verdict is None,
                "verdict": verdict.to_dict() if verdict else None,
                "next_sample": (
                    session.sample_index
                    if session.stage is not Stage.DONE
                    else None
                ),
                "turns_remaining": session.turns_remaining(),
            }
            if session.stage is Stage.DONE:
                body["report"] = session.score().to_dict()
            return body

    @app.get("/sessions/{session_id}")
    def snapshot(session_id: str,
                 authorization: Optional[str] = Header(default=None)):
        stored = app.state.store.get(session_id)
        require_owner(stored, authorization)
        with stored.lock:
            view = _session_view(stored)
            if stored.session.stage is Stage.DONE:
                view["report"] = stored.session.score().to_dict()
            return view

    return app


def main(argv=None) -> None:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="boxbench session service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8351)
    parser.add_argument("--ttl", type=float, default=DEFAULT_TTL_SECONDS,
                        help="session expiry in seconds")
    parser.add_argument("--persist", type=Path, default=None,
                        help="JSON snapshot path for file-backed persistence")
    args = parser.parse_args(argv)
    app = create_app(SessionStore(args.ttl, args.persist))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
