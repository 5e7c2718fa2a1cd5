"""Behavioral instructions: the compact contract between engine and performer.

The canonical wire form is a single bracketed line, e.g.::

    [Action: Answer Correctly; Confidence: 85%; Emotion: Joy; Tone: Eager;
     Contextual_Note: Use fortnite analogy if applicable]

(one line; wrapped here for width). The note segment is omitted entirely when
absent. ``parse_instruction`` accepts extra whitespace around separators but
nothing else; ``parse_instruction(serialize_instruction(i)) == i`` for every
valid instruction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Final

from .errors import InstructionParseError
from .profiles import BehavioralTraits, EmotionId


class ActionKind(str, Enum):
    ANSWER_CORRECTLY = "answer_correctly"
    ANSWER_INCORRECTLY = "answer_incorrectly"
    ASK_CLARIFICATION = "ask_clarification"
    REFUSE_TO_ANSWER = "refuse_to_answer"
    OFF_TASK_REMARK = "off_task_remark"
    STAY_SILENT = "stay_silent"


class ToneTag(str, Enum):
    EAGER = "eager"
    CONFIDENT = "confident"
    ATTENTIVE = "attentive"
    HESITANT = "hesitant"
    QUIET = "quiet"
    CURT = "curt"
    FLAT = "flat"
    SHARP = "sharp"
    INQUISITIVE = "inquisitive"
    ANIMATED = "animated"


# Total emotion -> tone map; every channel delivers in a distinct register.
EMOTION_TONE: Final[dict[EmotionId, ToneTag]] = {
    EmotionId.JOY: ToneTag.EAGER,
    EmotionId.PRIDE_ACCOMPLISHMENT: ToneTag.CONFIDENT,
    EmotionId.ENGAGEMENT: ToneTag.ATTENTIVE,
    EmotionId.CONFUSION: ToneTag.HESITANT,
    EmotionId.ANXIETY_SHYNESS: ToneTag.QUIET,
    EmotionId.RESENTMENT: ToneTag.CURT,
    EmotionId.BOREDOM: ToneTag.FLAT,
    EmotionId.FRUSTRATION: ToneTag.SHARP,
    EmotionId.CURIOSITY: ToneTag.INQUISITIVE,
    EmotionId.EXCITEMENT: ToneTag.ANIMATED,
}


def derive_tone(emotion: EmotionId, traits: BehavioralTraits) -> ToneTag:
    """Delivery tone for an emotion; ``traits`` is a hook for future overrides."""
    return EMOTION_TONE[emotion]


@dataclass
class BehavioralInstruction:
    action: ActionKind
    confidence_pct: int
    emotion: EmotionId
    tone: ToneTag
    contextual_note: str | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.confidence_pct <= 100:
            raise ValueError(f"confidence_pct {self.confidence_pct} outside [0, 100]")
        if self.contextual_note is not None:
            # Notes are stored stripped; blank notes collapse to "absent".
            self.contextual_note = self.contextual_note.strip() or None


# ── canonical text form ─────────────────────────────────────────────


def _display(value: str) -> str:
    return value.replace("_", " ").title()


_ACTION_BY_DISPLAY: Final[dict[str, ActionKind]] = {_display(a.value): a for a in ActionKind}
_EMOTION_BY_DISPLAY: Final[dict[str, EmotionId]] = {_display(e.value): e for e in EmotionId}
_TONE_BY_DISPLAY: Final[dict[str, ToneTag]] = {_display(t.value): t for t in ToneTag}

_OUTER_RE = re.compile(r"^\s*\[(.*)\]\s*$", re.DOTALL)
_CONFIDENCE_RE = re.compile(r"^(\d+)\s*%$")


def serialize_instruction(instruction: BehavioralInstruction) -> str:
    segments = [
        f"Action: {_display(instruction.action.value)}",
        f"Confidence: {instruction.confidence_pct}%",
        f"Emotion: {_display(instruction.emotion.value)}",
        f"Tone: {_display(instruction.tone.value)}",
    ]
    if instruction.contextual_note is not None:
        segments.append(f"Contextual_Note: {instruction.contextual_note}")
    return "[" + "; ".join(segments) + "]"


def _segment(text: str, expected_key: str) -> str:
    key, sep, value = text.partition(":")
    if not sep or key.strip() != expected_key:
        raise InstructionParseError(
            f"expected segment {expected_key!r}, got {text.strip()!r}", code="MALFORMED"
        )
    return value.strip()


def parse_instruction(text: str) -> BehavioralInstruction:
    """Strict inverse of ``serialize_instruction``.

    Raises ``InstructionParseError`` with code MALFORMED (shape), UNKNOWN_ENUM
    (unrecognized action/emotion/tone name), or RANGE (confidence outside
    0..100).
    """
    match = _OUTER_RE.match(text)
    if not match:
        raise InstructionParseError("instruction must be a single [bracketed] line", code="MALFORMED")
    body = match.group(1)
    # The note is the final segment and may itself contain semicolons, so
    # split off at most four structured segments and keep the rest intact.
    parts = body.split(";", 4)
    if len(parts) < 4:
        raise InstructionParseError("instruction is missing segments", code="MALFORMED")

    action_name = _segment(parts[0], "Action")
    confidence_raw = _segment(parts[1], "Confidence")
    emotion_name = _segment(parts[2], "Emotion")
    tone_name = _segment(parts[3], "Tone")
    note: str | None = None
    if len(parts) == 5:
        note = _segment(parts[4], "Contextual_Note")

    conf_match = _CONFIDENCE_RE.match(confidence_raw)
    if not conf_match:
        raise InstructionParseError(f"bad confidence segment {confidence_raw!r}", code="MALFORMED")
    confidence = int(conf_match.group(1))
    if confidence > 100:
        raise InstructionParseError(f"confidence {confidence}% outside 0..100", code="RANGE")

    try:
        action = _ACTION_BY_DISPLAY[action_name]
        emotion = _EMOTION_BY_DISPLAY[emotion_name]
        tone = _TONE_BY_DISPLAY[tone_name]
    except KeyError as exc:
        raise InstructionParseError(f"unknown enum name {exc.args[0]!r}", code="UNKNOWN_ENUM") from None

    return BehavioralInstruction(
        action=action,
        confidence_pct=confidence,
        emotion=emotion,
        tone=tone,
        contextual_note=note,
    )
