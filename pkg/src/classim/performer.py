"""Performers turn a behavioral instruction into a spoken line.

The instruction is the whole contract: backends receive the serialized
instruction, the persona blurb, a short transcript tail, and (for answer
actions) the ground-truth answer text. Raw profile parameters never cross
this boundary, so swapping backends cannot leak the machinery.

Two backends ship:

* ``template`` -- deterministic phrase table, keyed by (action, tone); used
  for tests, benchmarks, and offline runs.
* ``external`` -- a generic chat-completion HTTP endpoint (POST, JSON);
  configured via PERFORMER_URL / PERFORMER_API_KEY / PERFORMER_MODEL /
  PERFORMER_TIMEOUT_MS, with PERFORMER_BACKEND selecting it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Final

import httpx

from .config import PerformerSettings
from .errors import PerformerError
from .instructions import ActionKind, BehavioralInstruction, ToneTag, serialize_instruction

SILENT_STAGE_DIRECTION = "[stays quiet]"


@dataclass
class PerformerRequest:
    instruction: BehavioralInstruction
    persona_blurb: str
    transcript_tail: list[str] = field(default_factory=list)
    answer_text: str | None = None


@dataclass
class Utterance:
    text: str
    stage_direction: str | None
    backend_id: str
    latency_ms: float


# ── template backend ────────────────────────────────────────────────


def wrong_answer(answer: str) -> str:
    """Deterministic near-miss: off-by-one for numbers, a typo otherwise."""
    text = answer.strip()
    try:
        return str(int(text) + 1)
    except ValueError:
        pass
    try:
        return str(float(text) + 1.0)
    except ValueError:
        pass
    if len(text) >= 2:
        return text[:-2] + text[-1] + text[-2]
    return text + "o"


# Specific (action, tone) lines; anything not listed falls back per action.
_LINES: Final[dict[tuple[ActionKind, ToneTag], str]] = {
    (ActionKind.ANSWER_CORRECTLY, ToneTag.EAGER): "It's {answer}! I got this!",
    (ActionKind.ANSWER_CORRECTLY, ToneTag.CONFIDENT): "Easy. It's {answer}.",
    (ActionKind.ANSWER_CORRECTLY, ToneTag.ATTENTIVE): "I think it's {answer}.",
    (ActionKind.ANSWER_CORRECTLY, ToneTag.HESITANT): "Um... {answer}? I think?",
    (ActionKind.ANSWER_CORRECTLY, ToneTag.QUIET): "...{answer}.",
    (ActionKind.ANSWER_CORRECTLY, ToneTag.CURT): "{answer}.",
    (ActionKind.ANSWER_CORRECTLY, ToneTag.FLAT): "It's {answer}, I guess.",
    (ActionKind.ANSWER_CORRECTLY, ToneTag.SHARP): "It's {answer}. Obviously.",
    (ActionKind.ANSWER_CORRECTLY, ToneTag.INQUISITIVE): "It's {answer}... right?",
    (ActionKind.ANSWER_CORRECTLY, ToneTag.ANIMATED): "Ooh ooh, it's {answer}!",
    (ActionKind.ANSWER_INCORRECTLY, ToneTag.EAGER): "It's {answer}! Wait, no, it is!",
    (ActionKind.ANSWER_INCORRECTLY, ToneTag.CONFIDENT): "That one's {answer}, for sure.",
    (ActionKind.ANSWER_INCORRECTLY, ToneTag.HESITANT): "Maybe... {answer}?",
    (ActionKind.ANSWER_INCORRECTLY, ToneTag.QUIET): "...{answer}?",
    (ActionKind.ASK_CLARIFICATION, ToneTag.INQUISITIVE): "Wait, can you say that a different way?",
    (ActionKind.ASK_CLARIFICATION, ToneTag.QUIET): "Sorry... what do you mean?",
    (ActionKind.ASK_CLARIFICATION, ToneTag.SHARP): "That doesn't make sense. What are you asking?",
    (ActionKind.REFUSE_TO_ANSWER, ToneTag.CURT): "No.",
    (ActionKind.REFUSE_TO_ANSWER, ToneTag.FLAT): "I'm not doing this one.",
    (ActionKind.OFF_TASK_REMARK, ToneTag.ANIMATED): "Did anyone else hear what happened at lunch?!",
    (ActionKind.OFF_TASK_REMARK, ToneTag.FLAT): "Is it almost time to go?",
}

_ACTION_FALLBACK: Final[dict[ActionKind, str]] = {
    ActionKind.ANSWER_CORRECTLY: "It's {answer}.",
    ActionKind.ANSWER_INCORRECTLY: "I think it's {answer}.",
    ActionKind.ASK_CLARIFICATION: "Wait, what do you mean?",
    ActionKind.REFUSE_TO_ANSWER: "I don't want to answer that.",
    ActionKind.OFF_TASK_REMARK: "Can we talk about literally anything else?",
    ActionKind.STAY_SILENT: "",
}


class TemplateBackend:
    """Deterministic phrase-table performer; total over (action, tone)."""

    backend_id = "template"

    def perform(self, request: PerformerRequest) -> Utterance:
        instruction = request.instruction
        action = instruction.action
        line = _LINES.get((action, instruction.tone), _ACTION_FALLBACK[action])
        if "{answer}" in line:
            answer = request.answer_text or "the answer"
            if action is ActionKind.ANSWER_INCORRECTLY:
                answer = wrong_answer(answer)
            line = line.replace("{answer}", answer)
        direction = SILENT_STAGE_DIRECTION if action is ActionKind.STAY_SILENT else None
        return Utterance(text=line, stage_direction=direction, backend_id=self.backend_id, latency_ms=0.0)


# ── external backend ────────────────────────────────────────────────


def build_prompt(request: PerformerRequest) -> str:
    """User prompt for a chat-completion backend.

    Contains the persona blurb and serialized instruction verbatim plus a
    trailing transcript excerpt; contains no raw profile parameters, because
    none are reachable from a ``PerformerRequest``.
    """
    lines = [
        "You are roleplaying one student in a middle-school classroom.",
        f"Persona: {request.persona_blurb}",
        f"Perform exactly this behavioral instruction: {serialize_instruction(request.instruction)}",
        "Reply with the student's next spoken line only. Perform the instruction;"
        " do not explain it, do not reason about it.",
    ]
    if request.instruction.action is ActionKind.ANSWER_CORRECTLY and request.answer_text:
        lines.append(f"The correct answer is: {request.answer_text}")
    if request.instruction.action is ActionKind.ANSWER_INCORRECTLY and request.answer_text:
        lines.append(
            "Give a plausible wrong answer near the correct one"
            f" (the correct answer is {request.answer_text}; do not say it)."
        )
    if request.transcript_tail:
        lines.append("Recent classroom transcript:")
        lines.extend(request.transcript_tail)
    return "\n".join(lines)


class ExternalBackend:
    """Generic chat-completion client with a timeout and a single retry."""

    backend_id = "external"

    def __init__(self, settings: PerformerSettings, client: httpx.Client | None = None) -> None:
        if not settings.url:
            raise PerformerError("external performer needs PERFORMER_URL", code="BACKEND_UNREACHABLE")
        self._settings = settings
        self._client = client or httpx.Client(timeout=settings.timeout_ms / 1000.0)

    def perform(self, request: PerformerRequest) -> Utterance:
        payload = {
            "model": self._settings.model,
            "messages": [
                {"role": "system", "content": "You perform classroom student roles."},
                {"role": "user", "content": build_prompt(request)},
            ],
            "temperature": self._settings.temperature,
        }
        headers = {"Content-Type": "application/json"}
        if self._settings.api_key:
            headers["Authorization"] = f"Bearer {self._settings.api_key}"

        last_error: PerformerError | None = None
        for attempt in range(2):  # one try, one retry
            try:
                response = self._client.post(self._settings.url, json=payload, headers=headers)
            except httpx.TimeoutException:
                last_error = PerformerError("performer backend timed out", code="TIMEOUT")
                continue
            except httpx.HTTPError as exc:
                last_error = PerformerError(f"performer backend unreachable: {exc}", code="BACKEND_UNREACHABLE")
                continue
            if response.status_code >= 500:
                last_error = PerformerError(
                    f"performer backend returned {response.status_code}", code="BACKEND_UNREACHABLE"
                )
                continue
            if response.status_code != 200:
                raise PerformerError(
                    f"performer backend returned {response.status_code}", code="BAD_RESPONSE"
                )
            try:
                body = response.json()
                text = body["choices"][0]["message"]["content"]
            except (ValueError, LookupError, TypeError):
                raise PerformerError("performer response missing message content", code="BAD_RESPONSE") from None
            direction = (
                SILENT_STAGE_DIRECTION
                if request.instruction.action is ActionKind.STAY_SILENT
                else None
            )
            return Utterance(text=text, stage_direction=direction, backend_id=self.backend_id, latency_ms=0.0)
        assert last_error is not None
        raise last_error


def perform(request: PerformerRequest, backend) -> Utterance:
    """Run a backend and stamp the measured latency onto the utterance."""
    start = time.perf_counter()
    utterance = backend.perform(request)
    utterance.latency_ms = (time.perf_counter() - start) * 1000.0
    return utterance


def backend_for(settings: PerformerSettings):
    """Backend instance for the given settings (after env overrides)."""
    effective = settings.with_env_overrides()
    if effective.backend == "external":
        return ExternalBackend(effective)
    return TemplateBackend()
