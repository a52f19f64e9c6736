"""JSON-over-HTTP service exposing elicitation sessions to a browser client.

Persistence is a single append-only line-delimited event log; replaying it
reconstructs every session state exactly, so a restart mid-session loses
nothing.  A session's payout commitment is part of its creation event and no
endpoint can change it afterwards.  Mid-session attitude estimates are never
returned to the respondent (anchoring risk); indices appear only on the
post-completion result.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .core import EventPartition
from .elicitation import (
    ElicitationSession,
    commitment_digest,
    midpoint_indices,
    start_session,
)


class CreateSessionRequest(BaseModel):
    depth: int = Field(default=5, ge=1, le=12)
    respondent: str = "anonymous"
    wave: str = "1"
    cutoffs: tuple[float, float] = (950.0, 1100.0)
    seed: int | None = None


class ChoiceRequest(BaseModel):
    question: int
    chose_bet: bool


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


class SessionStore:
    """Append-only event log plus the derived in-memory session index.

    The store state is a pure fold over the log: ``session_created`` events
    re-run :func:`start_session` with the logged seed, ``choice_recorded``
    events re-apply the choice.  Writes are serialized per session and the
    log writer itself holds a single lock.
    """

    def __init__(self, log_path: str | Path | None = None) -> None:
        self.log_path = Path(log_path) if log_path else None
        self.sessions: dict[str, ElicitationSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._store_lock = threading.Lock()
        if self.log_path and self.log_path.exists():
            self._replay()

    def _replay(self) -> None:
        with self.log_path.open() as fp:
            for line in fp:
                if line.strip():
                    self._apply(json.loads(line))

    def _apply(self, event: dict) -> None:
        if event["event"] == "session_created":
            session = start_session(
                EventPartition(tuple(event["cutoffs"])),
                depth=event["depth"],
                seed=event["seed"],
                respondent=event["respondent"],
                wave=event["wave"],
            )
            self.sessions[event["id"]] = session
            self._locks[event["id"]] = threading.Lock()
        elif event["event"] == "choice_recorded":
            self.sessions[event["id"]].record_choice(event["chose_bet"])
        else:
            raise ValueError(f"unknown event type in log: {event['event']!r}")

    def _append(self, event: dict) -> None:
        if self.log_path is None:
            return
        with self._store_lock:
            with self.log_path.open("a") as fp:
                fp.write(json.dumps(event, sort_keys=True) + "\n")

    def create(self, request: CreateSessionRequest) -> tuple[str, ElicitationSession]:
        session_id = uuid.uuid4().hex
        seed = request.seed if request.seed is not None else secrets.randbits(63)
        event = {
            "event": "session_created",
            "ts": time.time(),
            "id": session_id,
            "respondent": request.respondent,
            "wave": request.wave,
            "depth": request.depth,
            "cutoffs": list(request.cutoffs),
            "seed": seed,
            "commitment": commitment_digest(seed, request.respondent, request.wave, request.depth),
        }
        self._apply(event)
        self._append(event)
        return session_id, self.sessions[session_id]

    def get(self, session_id: str) -> ElicitationSession:
        if session_id not in self.sessions:
            raise _error(404, "session_not_found", f"no session {session_id!r}")
        return self.sessions[session_id]

    def lock(self, session_id: str) -> threading.Lock:
        return self._locks[session_id]

    def completed_transcripts(self) -> str:
        """Completed sessions in the estimator's transcript format.

        The service thereby feeds the same line-delimited format as the
        simulator, so live respondents flow into estimation unchanged.
        """
        from .elicitation import transcript_lines

        chunks = []
        for session in self.sessions.values():
            if session.complete:
                result = session.finalize()
                chunks.extend(transcript_lines(session.respondent, result, session.wave))
        return "\n".join(chunks) + ("\n" if chunks else "")

    def record_choice(self, session_id: str, question: int, chose_bet: bool) -> ElicitationSession:
        session = self.get(session_id)
        with self.lock(session_id):
            if session.complete:
                raise _error(409, "session_complete", "all questions already answered")
            if question != session.answered:
                raise _error(
                    409,
                    "question_mismatch",
                    f"expected question {session.answered}, got {question}",
                )
            event = {
                "event": "choice_recorded",
                "ts": time.time(),
                "id": session_id,
                "question": question,
                "chose_bet": bool(chose_bet),
            }
            session.record_choice(bool(chose_bet))
            self._append(event)
        return session


def create_app(store: SessionStore | None = None) -> FastAPI:
    store = store if store is not None else SessionStore()
    app = FastAPI(title="belief-hedging elicitation service")
    app.state.store = store

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "sessions": len(store.sessions)}

    @app.post("/sessions", status_code=201)
    def create_session(request: CreateSessionRequest):
        try:
            session_id, session = store.create(request)
        except ValueError as exc:
            raise _error(400, "invalid_config", str(exc))
        return {
            "session_id": session_id,
            "commitment": session.commitment,
            "total_questions": session.total_questions,
            "depth": session.depth,
            "respondent": session.respondent,
            "wave": session.wave,
            "stake_text": session.partition.stake_text,
        }

    @app.get("/sessions/{session_id}/next")
    def get_next(session_id: str):
        session = store.get(session_id)
        pending = session.next_question()
        if pending is None:
            return {"done": True, "answered": session.answered, "total": session.total_questions}
        event, q = pending
        return {
            "done": False,
            "question": {
                "ordinal": session.answered,
                "event": event,
                "description": session.partition.describe(event),
                "lottery_percent": 100.0 * q,
                "stake_text": session.partition.stake_text,
            },
            "answered": session.answered,
            "total": session.total_questions,
        }

    @app.post("/sessions/{session_id}/choices")
    def post_choice(session_id: str, body: ChoiceRequest):
        session = store.record_choice(session_id, body.question, body.chose_bet)
        return {
            "answered": session.answered,
            "remaining": session.total_questions - session.answered,
            "done": session.complete,
        }

    @app.get("/sessions/{session_id}/result")
    def get_result(session_id: str):
        session = store.get(session_id)
        if not session.complete:
            raise _error(409, "session_incomplete", "answer all questions before fetching results")
        result = session.finalize()
        aversion, sensitivity = midpoint_indices(result.intervals)
        digest = commitment_digest(result.seed, session.respondent, session.wave, session.depth)
        if digest != result.commitment:
            raise _error(500, "commitment_mismatch", "revealed seed fails digest verification")
        return {
            "intervals": [
                {"event": iv.event, "lb": iv.lb, "ub": iv.ub, "midpoint": iv.midpoint}
                for iv in result.intervals
            ],
            "seed": result.seed,
            "commitment": result.commitment,
            "payout": {
                "question": result.payout.question,
                "event": result.payout.event,
                "lottery_percent": 100.0 * result.payout.q,
                "chose_bet": result.payout.chose_bet,
                "outcome": result.payout.outcome,
            },
            "indices": {"aversion": aversion, "sensitivity": sensitivity},
        }

    return app


def main() -> None:  # pragma: no cover - exercised via the CLI
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="run the elicitation service")
    parser.add_argument("--log", default="sessions.jsonl", help="append-only event log path")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args()
    uvicorn.run(create_app(SessionStore(args.log)), host=args.host, port=args.port)


if __name__ == "__main__":  # pragma: no cover
    main()
