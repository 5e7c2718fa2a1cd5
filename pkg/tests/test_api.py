from __future__ import annotations

import json
import threading
import time

import pytest
from fastapi.testclient import TestClient

import classim.api as api_module
from classim.api import create_app

from conftest import fixture_path

WORKED_EXAMPLE = (
    "[Action: Answer Correctly; Confidence: 85%; Emotion: Joy; Tone: Eager; "
    "Contextual_Note: Use fortnite analogy if applicable]"
)


@pytest.fixture()
def client():
    with TestClient(create_app()) as test_client:
        yield test_client


def create_demo_session(client: TestClient, seed: int = 9) -> str:
    response = client.post("/sessions", json={"seed": seed})
    assert response.status_code == 201
    return response.json()["session_id"]


def ask_devin_payload() -> dict:
    return {
        "kind": "ask_question",
        "target": "devin",
        "topic_tags": ["4x", "multiplication", "tables"],
        "text": "Devin, what is 4 times 3?",
    }


# ── session lifecycle ───────────────────────────────────────────────


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_create_session_defaults_to_bundled_roster(client):
    response = client.post("/sessions", json={})
    assert response.status_code == 201
    body = response.json()
    assert body["roster_id"] == "demo-classroom"
    assert body["stage"] == "Stage1"
    assert body["turn"] == 0
    assert body["transcript"] == []
    assert [s["student_id"] for s in body["students"]] == ["devin", "maya", "jordan"]
    assert body["exaggeration_factor"] == 2.0


def test_create_session_accepts_inline_roster(client):
    with open(fixture_path("demo_roster.json")) as fh:
        roster_doc = json.load(fh)
    response = client.post("/sessions", json={"roster": roster_doc, "stage": "Stage2"})
    assert response.status_code == 201
    assert response.json()["stage"] == "Stage2"


def test_create_session_rejects_unknown_fields(client):
    response = client.post("/sessions", json={"seeed": 1})
    assert response.status_code == 422


def test_create_session_rejects_unknown_stage(client):
    response = client.post("/sessions", json={"stage": "Stage9"})
    assert response.status_code == 400
    assert response.json()["code"] == "SCHEMA_MISMATCH"


def test_create_session_rejects_invalid_roster(client):
    with open(fixture_path("demo_roster.json")) as fh:
        roster_doc = json.load(fh)
    roster_doc["students"][0]["cognitive"][0]["mastery"] = 5.0
    response = client.post("/sessions", json={"roster": roster_doc})
    assert response.status_code == 400
    assert response.json()["code"] == "VALIDATION"


def test_unknown_session_is_404(client):
    response = client.get("/sessions/nope")
    assert response.status_code == 404
    assert response.json() == {"code": "UNKNOWN_SESSION", "message": "no session 'nope'"}


# ── events ──────────────────────────────────────────────────────────


def test_submit_event_returns_instruction_and_utterance(client):
    session_id = create_demo_session(client, seed=9)
    response = client.post(f"/sessions/{session_id}/events", json=ask_devin_payload())
    assert response.status_code == 200
    body = response.json()
    assert body["turn"] == 0
    (student,) = body["responses"]
    assert student["student_id"] == "devin"
    assert student["instruction"] == WORKED_EXAMPLE
    assert student["action"] == "answer_correctly"
    assert student["confidence_pct"] == 85
    assert student["utterance"]["text"] == "It's 12! I got this!"
    devin_view = next(s for s in body["students"] if s["student_id"] == "devin")
    assert devin_view["dominant_emotion"] == "joy"


def test_turns_advance_and_snapshot_tracks_transcript(client):
    session_id = create_demo_session(client)
    client.post(f"/sessions/{session_id}/events", json=ask_devin_payload())
    client.post(f"/sessions/{session_id}/events", json={"kind": "compliment", "target": "devin"})
    snapshot = client.get(f"/sessions/{session_id}").json()
    assert snapshot["turn"] == 2
    assert snapshot["metrics"]["events"] == 2
    speakers = [entry["speaker"] for entry in snapshot["transcript"]]
    assert speakers == ["teacher", "devin", "teacher"]


def test_unknown_event_target_is_400(client):
    session_id = create_demo_session(client)
    response = client.post(
        f"/sessions/{session_id}/events", json={"kind": "compliment", "target": "ghost"}
    )
    assert response.status_code == 400
    assert response.json()["code"] == "UNKNOWN_TARGET"


def test_unknown_event_kind_is_400(client):
    session_id = create_demo_session(client)
    response = client.post(f"/sessions/{session_id}/events", json={"kind": "dance"})
    assert response.status_code == 400
    assert response.json()["code"] == "SCHEMA_MISMATCH"


def test_targeted_event_without_target_is_400(client):
    session_id = create_demo_session(client)
    response = client.post(f"/sessions/{session_id}/events", json={"kind": "ask_question"})
    assert response.status_code == 400


# ── streaming ───────────────────────────────────────────────────────


def _parse_sse(text: str) -> list[tuple[str, dict]]:
    """SSE body -> [(event, data)], ignoring keepalive comments."""
    frames = []
    for block in text.split("\n\n"):
        event, data = None, None
        for line in block.splitlines():
            if line.startswith("event: "):
                event = line.removeprefix("event: ")
            elif line.startswith("data: "):
                data = json.loads(line.removeprefix("data: "))
        if event is not None and data is not None:
            frames.append((event, data))
    return frames


def test_stream_delivers_transcript_and_emotion_events(client, monkeypatch):
    # Keep the queue poll short so a broken broadcast fails fast instead of
    # idling through 15 s keepalive windows.
    monkeypatch.setattr(api_module, "STREAM_KEEPALIVE_SECONDS", 0.2)
    session_id = create_demo_session(client, seed=9)

    # hello + teacher entry + student entry + emotion snapshot
    results: list = []
    reader = threading.Thread(
        target=lambda: results.append(
            client.get(f"/sessions/{session_id}/stream", params={"max_events": 4})
        ),
        daemon=True,
    )
    reader.start()

    # Wait until the subscriber is registered before submitting the event.
    handle = client.app.state.registry.get(session_id)
    deadline = time.monotonic() + 5.0
    while not handle.subscribers:
        assert time.monotonic() < deadline, "stream never subscribed"
        time.sleep(0.005)

    client.post(f"/sessions/{session_id}/events", json=ask_devin_payload())
    reader.join(timeout=10.0)
    assert not reader.is_alive(), "stream never completed"

    (response,) = results
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/event-stream")
    frames = _parse_sse(response.text)
    kinds = [kind for kind, _ in frames]
    assert kinds == ["hello", "transcript", "transcript", "emotion"]
    assert frames[0][1] == {"session_id": session_id, "turn": 0}
    teacher_entry = frames[1][1]["entry"]
    assert teacher_entry["speaker"] == "teacher"
    student_entry = frames[2][1]["entry"]
    assert student_entry["speaker"] == "devin"
    assert student_entry["text"] == "It's 12! I got this!"
    emotion = frames[3][1]
    assert emotion["exaggeration_factor"] == 2.0
    devin_view = next(s for s in emotion["students"] if s["student_id"] == "devin")
    assert 0.0 <= devin_view["emotions"]["joy"] <= 1.0


def test_stream_for_unknown_session_is_404(client):
    response = client.get("/sessions/nope/stream")
    assert response.status_code == 404


# ── benchmarks ──────────────────────────────────────────────────────


def test_benchmark_endpoint_counts_calls(client):
    response = client.post(
        "/benchmarks",
        json={"per_call_latency_ms": 2.0, "stages": 2, "beam": 2, "turns": 3},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["single"]["performer_calls"] == 3
    assert body["baseline"]["performer_calls"] == 12
    assert body["single"]["calls_per_turn"] == 1.0
    assert body["baseline"]["calls_per_turn"] == 4.0
    assert body["speedup"] > 1.0
