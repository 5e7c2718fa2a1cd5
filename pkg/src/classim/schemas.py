"""Request/response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_serializer


class SessionCreateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    roster_path: str | None = Field(default=None, description="Server-side roster JSON path")
    roster: dict | None = Field(default=None, description="Inline roster document")
    stage: str = "Stage1"
    seed: int = 0
    backend: str | None = Field(default=None, description="'template' or 'external'")
    config: dict | None = Field(default=None, description="Inline simulator config overrides")


class TeacherEventModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str
    target: str | None = None
    topic_tags: list[str] = Field(default_factory=list)
    text: str = ""
    near: bool | None = None


class UtteranceModel(BaseModel):
    text: str
    stage_direction: str | None = None
    backend_id: str
    latency_ms: float


class StudentResponseModel(BaseModel):
    student_id: str
    instruction: str
    action: str
    confidence_pct: int
    emotion: str
    tone: str
    contextual_note: str | None = None
    node_id: str
    utterance: UtteranceModel


class StudentViewModel(BaseModel):
    student_id: str
    display_name: str
    emotions: dict[str, float]
    dominant_emotion: str
    last_utterance: str | None = None


class TranscriptEntryModel(BaseModel):
    turn: int
    speaker: str
    text: str
    instruction: str | None = None

    @model_serializer(mode="wrap")
    def _canonical_shape(self, handler):
        # Teacher lines carry no instruction; the key is omitted rather than
        # null so snapshot entries match the stream frames and log records
        # byte for byte.
        doc = handler(self)
        if doc.get("instruction") is None:
            doc.pop("instruction", None)
        return doc


class SessionSnapshotModel(BaseModel):
    session_id: str
    roster_id: str
    stage: str
    exaggeration_factor: float
    turn: int
    students: list[StudentViewModel]
    transcript: list[TranscriptEntryModel]
    metrics: dict


class EventResultModel(BaseModel):
    session_id: str
    turn: int
    responses: list[StudentResponseModel]
    students: list[StudentViewModel]


class BenchmarkRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    per_call_latency_ms: float = 100.0
    stages: int = 5
    beam: int = 3
    turns: int = 10
    seed: int = 7


class PipelineStatsModel(BaseModel):
    label: str
    performer_calls: int
    calls_per_turn: float
    wall_ms: float


class BenchmarkReportModel(BaseModel):
    config: dict
    single: PipelineStatsModel
    baseline: PipelineStatsModel
    speedup: float


class ErrorModel(BaseModel):
    code: str
    message: str
