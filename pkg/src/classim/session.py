"""Classroom sessions: the single-writer loop that ties the engine together.

Per submitted teacher event the pipeline is fixed:

    apply_event -> propagate_peer_influence -> spin (addressed student)
    -> perform -> append transcript -> tick_decay -> turn += 1

Observable turn state (responses, the emotion snapshot pushed to streams)
is captured after the spins and before the decay tick, so a fresh modifier
shows at full strength on the turn it fires. Everything a session does is
driven by (roster, seed, event script): two sessions with identical inputs
produce byte-identical transcripts and logs.
"""

from __future__ import annotations

import random
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from statistics import median

from .config import SimConfig
from .errors import RosterSchemaError, UnknownTargetError
from .events import TeacherEvent, TeacherEventKind
from .instructions import ActionKind, BehavioralInstruction, serialize_instruction
from .modifiers import ModifierInstance, apply_event, propagate_peer_influence, tick_decay
from .performer import PerformerRequest, TemplateBackend, Utterance, perform
from .profiles import EmotionId, StudentProfile, current_affect
from .spin import SpinContext, spin
from .stages import RealismStage, StageCaps, clamp_to_stage, stage_caps
from .store import Roster, canonical_json, parse_roster, read_jsonl, roster_to_json, write_jsonl

LOG_SCHEMA_VERSION = 1

# A disruption counts as handled if the teacher turns to that student within
# this many subsequent events.
DISRUPTION_WINDOW_TURNS = 2

CONSTRUCTIVE_KINDS = frozenset(
    {
        TeacherEventKind.ASK_QUESTION,
        TeacherEventKind.COMPLIMENT,
        TeacherEventKind.INSTRUCTION,
        TeacherEventKind.PROXIMITY,
        TeacherEventKind.WAIT,
    }
)


@dataclass
class TranscriptEntry:
    turn: int
    speaker: str  # "teacher" or a student id
    text: str
    instruction: str | None = None

    def to_json_dict(self) -> dict:
        doc: dict = {"turn": self.turn, "speaker": self.speaker, "text": self.text}
        if self.instruction is not None:
            doc["instruction"] = self.instruction
        return doc


@dataclass
class StudentResponse:
    student_id: str
    instruction: BehavioralInstruction
    instruction_str: str
    utterance: Utterance
    node_id: str


@dataclass
class SessionState:
    session_id: str
    roster: Roster  # stage-clamped snapshot of the active students
    stage: RealismStage
    caps: StageCaps
    turn: int
    rng_seed: int
    config: SimConfig
    transcript: list[TranscriptEntry] = field(default_factory=list)
    instances: dict[str, list[ModifierInstance]] = field(default_factory=dict)
    rng: random.Random = field(default_factory=random.Random, compare=False, repr=False)


class ClassroomSession:
    """Owner of one session's state; callers serialize writes per session."""

    def __init__(
        self,
        roster: Roster,
        stage: RealismStage = RealismStage.STAGE1,
        seed: int = 0,
        config: SimConfig | None = None,
        backend=None,
        session_id: str | None = None,
    ) -> None:
        cfg = config if config is not None else SimConfig()
        caps = stage_caps(stage, cfg.stage_caps)
        self._source_roster_doc = roster_to_json(roster)
        active = roster.students[: caps.max_roster_active]
        clamped = Roster(
            roster_id=roster.roster_id,
            students=[clamp_to_stage(p, caps) for p in active],
        )
        self.state = SessionState(
            session_id=session_id or uuid.uuid4().hex,
            roster=clamped,
            stage=stage,
            caps=caps,
            turn=0,
            rng_seed=seed,
            config=cfg,
            rng=random.Random(seed),
        )
        self.backend = backend if backend is not None else TemplateBackend()
        self._records: list[dict] = []
        self.spin_latencies_ms: list[float] = []
        self.last_emotions: dict[str, dict[EmotionId, float]] = {
            p.student_id: current_affect(p, []) for p in clamped.students
        }
        self._event_count = 0
        self._constructive_count = 0
        self._open_disruptions: list[dict] = []
        self._resolved_disruptions = 0
        self._total_disruptions = 0

    # ── event pipeline ───────────────────────────────────────────

    def submit_event(self, event: TeacherEvent) -> list[StudentResponse]:
        state = self.state
        event.turn = state.turn
        started = time.perf_counter()

        created = apply_event(state, event)
        created += propagate_peer_influence(state)
        self._track_trainee(event)

        responses: list[StudentResponse] = []
        outcomes: list[tuple[StudentProfile, object]] = []
        for profile in self._responders(event):
            ctx = SpinContext(
                topic_tags=set(event.topic_tags),
                student_id=profile.student_id,
                turn=state.turn,
                caps=state.caps,
            )
            outcome = spin(
                profile, state.instances.get(profile.student_id, []), ctx, state.rng, state.config
            )
            if profile.student_id != event.target and not outcome.trace.wildcard_fired:
                continue  # unaddressed students only interject on a wildcard
            outcomes.append((profile, outcome))
        instruction_ready = time.perf_counter()
        if outcomes:
            self.spin_latencies_ms.append((instruction_ready - started) * 1000.0)

        # snapshot the observable emotion state before decay
        self.last_emotions = {
            p.student_id: current_affect(p, state.instances.get(p.student_id, []))
            for p in state.roster.students
        }

        teacher_entry = TranscriptEntry(turn=state.turn, speaker="teacher", text=event.text)
        state.transcript.append(teacher_entry)

        for profile, outcome in outcomes:
            instruction = outcome.instruction
            if instruction.action is ActionKind.OFF_TASK_REMARK:
                self._total_disruptions += 1
                self._open_disruptions.append({"student_id": profile.student_id, "turn": state.turn})
            node = profile.node(outcome.trace.retrieved_node_ids[0])
            answer = node.description if node is not None else None
            request = PerformerRequest(
                instruction=instruction,
                persona_blurb=profile.persona_blurb,
                transcript_tail=[
                    f"{entry.speaker}: {entry.text}"
                    for entry in state.transcript[-state.config.transcript_context_turns :]
                ],
                answer_text=answer
                if instruction.action
                in (ActionKind.ANSWER_CORRECTLY, ActionKind.ANSWER_INCORRECTLY)
                else None,
            )
            utterance = perform(request, self.backend)
            serialized = serialize_instruction(instruction)
            display_text = utterance.text or utterance.stage_direction or ""
            entry = TranscriptEntry(
                turn=state.turn,
                speaker=profile.student_id,
                text=display_text,
                instruction=serialized,
            )
            state.transcript.append(entry)
            responses.append(
                StudentResponse(
                    student_id=profile.student_id,
                    instruction=instruction,
                    instruction_str=serialized,
                    utterance=utterance,
                    node_id=outcome.trace.retrieved_node_ids[0],
                )
            )
            self._records.append(
                {
                    "type": "spin",
                    "turn": state.turn,
                    "student_id": profile.student_id,
                    "instruction": serialized,
                    "node_id": outcome.trace.retrieved_node_ids[0],
                    "draws": outcome.trace.draws,
                    "wildcard_fired": outcome.trace.wildcard_fired,
                }
            )

        self._records.append(
            {
                "type": "event",
                "turn": state.turn,
                "event": event.to_json_dict(),
                "instances": [inst.instance_id for inst in created],
            }
        )
        self._records.append({"type": "transcript", **teacher_entry.to_json_dict()})
        for response in responses:
            entry_doc = {
                "type": "transcript",
                "turn": state.turn,
                "speaker": response.student_id,
                "text": response.utterance.text or response.utterance.stage_direction or "",
                "instruction": response.instruction_str,
            }
            self._records.append(entry_doc)

        tick_decay(state)
        state.turn += 1
        return responses

    def _responders(self, event: TeacherEvent) -> list[StudentProfile]:
        state = self.state
        if event.kind is not TeacherEventKind.ASK_QUESTION:
            return []
        ordered: list[StudentProfile] = []
        target = state.roster.by_id(event.target)
        if target is None:
            raise UnknownTargetError(f"event targets unknown student {event.target!r}")
        ordered.append(target)
        if state.config.wildcard_for_unaddressed:
            for profile in state.roster.students:
                if profile.student_id != event.target:
                    ordered.append(profile)
        return ordered

    def _track_trainee(self, event: TeacherEvent) -> None:
        self._event_count += 1
        if event.kind in CONSTRUCTIVE_KINDS:
            self._constructive_count += 1
        if event.target:
            still_open = []
            for disruption in self._open_disruptions:
                if (
                    disruption["student_id"] == event.target
                    and self.state.turn - disruption["turn"] <= DISRUPTION_WINDOW_TURNS
                ):
                    self._resolved_disruptions += 1
                else:
                    still_open.append(disruption)
            self._open_disruptions = still_open

    # ── views ────────────────────────────────────────────────────

    def metrics(self) -> dict:
        latencies = self.spin_latencies_ms
        return {
            "events": self._event_count,
            "turns": self.state.turn,
            "median_spin_ms": median(latencies) if latencies else 0.0,
            "mean_spin_ms": sum(latencies) / len(latencies) if latencies else 0.0,
            "constructive_event_fraction": (
                self._constructive_count / self._event_count if self._event_count else 0.0
            ),
            "disruptions": self._total_disruptions,
            "disruption_resolution_rate": (
                self._resolved_disruptions / self._total_disruptions
                if self._total_disruptions
                else 1.0
            ),
        }

    def snapshot(self) -> dict:
        state = self.state
        students = []
        for profile in state.roster.students:
            emotions = self.last_emotions.get(profile.student_id) or current_affect(
                profile, state.instances.get(profile.student_id, [])
            )
            # max() keeps the first of equals, i.e. channel declaration order
            dominant = max(EmotionId, key=lambda e: emotions.get(e, 0.0))
            last_line = next(
                (
                    entry.text
                    for entry in reversed(state.transcript)
                    if entry.speaker == profile.student_id
                ),
                None,
            )
            students.append(
                {
                    "student_id": profile.student_id,
                    "display_name": profile.display_name,
                    "emotions": {e.value: emotions.get(e, 0.0) for e in EmotionId},
                    "dominant_emotion": dominant.value,
                    "last_utterance": last_line,
                }
            )
        return {
            "session_id": state.session_id,
            "roster_id": state.roster.roster_id,
            "stage": state.stage.value,
            "exaggeration_factor": state.caps.exaggeration_factor,
            "turn": state.turn,
            "students": students,
            "transcript": [entry.to_json_dict() for entry in state.transcript],
            "metrics": self.metrics(),
        }

    # ── persistence and replay ───────────────────────────────────

    def log_records(self) -> list[dict]:
        header = {
            "type": "header",
            "log_schema_version": LOG_SCHEMA_VERSION,
            "session_id": self.state.session_id,
            "stage": self.state.stage.value,
            "seed": self.state.rng_seed,
            "roster": self._source_roster_doc,
            "config": self.state.config.to_json_dict(),
        }
        return [header] + list(self._records)

    def save_log(self, path: str | Path) -> None:
        write_jsonl(path, self.log_records())

    def transcript_lines(self) -> list[str]:
        return [canonical_json(entry.to_json_dict()) for entry in self.state.transcript]


def create_session(
    roster: Roster,
    stage: RealismStage = RealismStage.STAGE1,
    seed: int = 0,
    config: SimConfig | None = None,
    backend=None,
    session_id: str | None = None,
) -> ClassroomSession:
    return ClassroomSession(
        roster=roster, stage=stage, seed=seed, config=config, backend=backend, session_id=session_id
    )


@dataclass
class ReplayResult:
    ok: bool
    session: ClassroomSession
    expected: list[str]
    actual: list[str]


def replay_log(path: str | Path) -> ReplayResult:
    """Rebuild a session from a saved log and re-run its event script.

    The replayed record stream (everything after the header) must match the
    saved one byte-for-byte when both are canonically serialized.
    """
    records = read_jsonl(path)
    if not records or records[0].get("type") != "header":
        raise RosterSchemaError(f"{path}: first record must be a header")
    header = records[0]
    if header.get("log_schema_version") != LOG_SCHEMA_VERSION:
        raise RosterSchemaError(f"unsupported log schema version {header.get('log_schema_version')!r}")
    roster = parse_roster(header["roster"])
    config = SimConfig.from_json_dict(header["config"])
    session = create_session(
        roster,
        stage=RealismStage(header["stage"]),
        seed=int(header["seed"]),
        config=config,
        session_id=header["session_id"],
    )
    for record in records[1:]:
        if record.get("type") == "event":
            session.submit_event(TeacherEvent.from_json_dict(record["event"]))
    expected = [canonical_json(r) for r in records[1:]]
    actual = [canonical_json(r) for r in session.log_records()[1:]]
    return ReplayResult(ok=expected == actual, session=session, expected=expected, actual=actual)
