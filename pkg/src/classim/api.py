"""HTTP/JSON session service.

Endpoints:

* ``POST /sessions``              -- create a session (defaults to the bundled demo roster)
* ``POST /sessions/{id}/events``  -- submit one teacher event, get the responses
* ``GET  /sessions/{id}``         -- full snapshot (roster view + transcript + metrics)
* ``GET  /sessions/{id}/stream``  -- SSE stream of transcript appends and emotion updates
* ``POST /benchmarks``            -- run the single-call vs multi-stage benchmark

Writes are serialized per session with a lock; readers get snapshots, and
stream subscribers get their own queues, so a slow console never blocks the
session loop.
"""

from __future__ import annotations

import json
import logging
import queue
import threading
from importlib import resources

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse

from .benchmark import BenchmarkConfig, run_benchmark
from .config import SimConfig
from .errors import RosterSchemaError, SimulationError, UnknownSessionError
from .events import TeacherEvent, TeacherEventKind
from .performer import backend_for
from .schemas import (
    BenchmarkReportModel,
    BenchmarkRequest,
    EventResultModel,
    SessionCreateRequest,
    SessionSnapshotModel,
    StudentResponseModel,
    StudentViewModel,
    TeacherEventModel,
    UtteranceModel,
)
from .session import ClassroomSession, StudentResponse, create_session
from .stages import RealismStage
from .store import load_roster, parse_roster

logger = logging.getLogger(__name__)

_STATUS_FOR_CODE = {
    "UNKNOWN_SESSION": 404,
    "UNKNOWN_TARGET": 400,
    "VALIDATION": 400,
    "SCHEMA_MISMATCH": 400,
    "EMPTY_CONTEXT": 400,
    "NO_FALLBACK": 400,
    "MALFORMED": 400,
    "UNKNOWN_ENUM": 400,
    "RANGE": 400,
    "UNKNOWN_PATH": 400,
    "BACKEND_UNREACHABLE": 502,
    "TIMEOUT": 502,
    "BAD_RESPONSE": 502,
}

STREAM_KEEPALIVE_SECONDS = 15.0


class SessionHandle:
    def __init__(self, session: ClassroomSession) -> None:
        self.session = session
        self.lock = threading.Lock()
        self.subscribers: list[queue.Queue] = []


class SessionRegistry:
    def __init__(self) -> None:
        self._handles: dict[str, SessionHandle] = {}
        self._lock = threading.Lock()

    def add(self, session: ClassroomSession) -> SessionHandle:
        handle = SessionHandle(session)
        with self._lock:
            self._handles[session.state.session_id] = handle
        return handle

    def get(self, session_id: str) -> SessionHandle:
        with self._lock:
            handle = self._handles.get(session_id)
        if handle is None:
            raise UnknownSessionError(f"no session {session_id!r}")
        return handle


def default_roster_path() -> str:
    return str(resources.files("classim") / "fixtures" / "demo_roster.json")


def _student_views(session: ClassroomSession) -> list[StudentViewModel]:
    return [StudentViewModel(**doc) for doc in session.snapshot()["students"]]


def _response_models(responses: list[StudentResponse]) -> list[StudentResponseModel]:
    models = []
    for response in responses:
        instruction = response.instruction
        models.append(
            StudentResponseModel(
                student_id=response.student_id,
                instruction=response.instruction_str,
                action=instruction.action.value,
                confidence_pct=instruction.confidence_pct,
                emotion=instruction.emotion.value,
                tone=instruction.tone.value,
                contextual_note=instruction.contextual_note,
                node_id=response.node_id,
                utterance=UtteranceModel(
                    text=response.utterance.text,
                    stage_direction=response.utterance.stage_direction,
                    backend_id=response.utterance.backend_id,
                    latency_ms=response.utterance.latency_ms,
                ),
            )
        )
    return models


def _sse(event: str, data: dict) -> str:
    return f"event: {event}\ndata: {json.dumps(data, ensure_ascii=False)}\n\n"


def create_app(registry: SessionRegistry | None = None) -> FastAPI:
    app = FastAPI(title="classim session service", version="0.1.0")
    app.state.registry = registry if registry is not None else SessionRegistry()

    @app.exception_handler(SimulationError)
    async def _simulation_error(request: Request, exc: SimulationError) -> JSONResponse:
        status = _STATUS_FOR_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content={"code": exc.code, "message": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", response_model=SessionSnapshotModel, status_code=201)
    def create(request: SessionCreateRequest) -> SessionSnapshotModel:
        if request.roster is not None:
            roster = parse_roster(request.roster)
        else:
            roster = load_roster(request.roster_path or default_roster_path())
        config = SimConfig.from_json_dict(request.config) if request.config else SimConfig()
        if request.backend:
            config.performer.backend = request.backend
        try:
            stage = RealismStage(request.stage)
        except ValueError:
            raise RosterSchemaError(f"unknown stage: {request.stage!r}") from None
        session = create_session(
            roster,
            stage=stage,
            seed=request.seed,
            config=config,
            backend=backend_for(config.performer),
        )
        app.state.registry.add(session)
        logger.info("created session %s (stage=%s seed=%d)", session.state.session_id, request.stage, request.seed)
        return SessionSnapshotModel(**session.snapshot())

    @app.get("/sessions/{session_id}", response_model=SessionSnapshotModel)
    def snapshot(session_id: str) -> SessionSnapshotModel:
        handle = app.state.registry.get(session_id)
        with handle.lock:
            return SessionSnapshotModel(**handle.session.snapshot())

    @app.post("/sessions/{session_id}/events", response_model=EventResultModel)
    def submit(session_id: str, body: TeacherEventModel) -> EventResultModel:
        handle = app.state.registry.get(session_id)
        try:
            event = TeacherEvent(
                kind=TeacherEventKind(body.kind),
                target=body.target,
                topic_tags=set(body.topic_tags),
                text=body.text,
                near=body.near,
            )
        except ValueError as exc:
            raise RosterSchemaError(str(exc)) from None
        with handle.lock:
            turn = handle.session.state.turn
            responses = handle.session.submit_event(event)
            result = EventResultModel(
                session_id=session_id,
                turn=turn,
                responses=_response_models(responses),
                students=_student_views(handle.session),
            )
            new_entries = [
                entry.to_json_dict()
                for entry in handle.session.state.transcript
                if entry.turn == turn
            ]
            exaggeration = handle.session.state.caps.exaggeration_factor
            messages = [_sse("transcript", {"session_id": session_id, "entry": e}) for e in new_entries]
            messages.append(
                _sse(
                    "emotion",
                    {
                        "session_id": session_id,
                        "turn": turn,
                        "exaggeration_factor": exaggeration,
                        "students": [view.model_dump() for view in result.students],
                    },
                )
            )
            for subscriber in list(handle.subscribers):
                for message in messages:
                    subscriber.put(message)
        return result

    @app.get("/sessions/{session_id}/stream")
    def stream(session_id: str, max_events: int | None = None) -> StreamingResponse:
        """SSE stream; ``max_events`` caps delivered events (hello included)
        so polling clients can take a batch and hang up."""
        handle = app.state.registry.get(session_id)
        subscriber: queue.Queue = queue.Queue()

        def feed():
            with handle.lock:
                handle.subscribers.append(subscriber)
                hello = {"session_id": session_id, "turn": handle.session.state.turn}
            sent = 0
            try:
                yield _sse("hello", hello)
                sent += 1
                while max_events is None or sent < max_events:
                    try:
                        message = subscriber.get(timeout=STREAM_KEEPALIVE_SECONDS)
                    except queue.Empty:
                        yield ": keepalive\n\n"
                        continue
                    yield message
                    sent += 1
            finally:
                with handle.lock:
                    if subscriber in handle.subscribers:
                        handle.subscribers.remove(subscriber)

        return StreamingResponse(feed(), media_type="text/event-stream")

    @app.post("/benchmarks", response_model=BenchmarkReportModel)
    def benchmark(body: BenchmarkRequest) -> BenchmarkReportModel:
        report = run_benchmark(
            BenchmarkConfig(
                per_call_latency_ms=body.per_call_latency_ms,
                stages=body.stages,
                beam=body.beam,
                turns=body.turns,
                seed=body.seed,
            )
        )
        return BenchmarkReportModel(**report.to_json_dict())

    return app


app = create_app()
