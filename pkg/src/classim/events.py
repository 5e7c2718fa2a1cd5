"""Teacher-side events: the inputs that drive a classroom session forward."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import RosterSchemaError


class TeacherEventKind(str, Enum):
    ASK_QUESTION = "ask_question"
    COMPLIMENT = "compliment"
    HARSH_CRITIQUE = "harsh_critique"
    INSTRUCTION = "instruction"
    PROXIMITY = "proximity"
    WAIT = "wait"


# Kinds that address a single student and therefore require a target id.
TARGETED_KINDS = frozenset(
    {
        TeacherEventKind.ASK_QUESTION,
        TeacherEventKind.COMPLIMENT,
        TeacherEventKind.HARSH_CRITIQUE,
        TeacherEventKind.PROXIMITY,
    }
)


@dataclass
class TeacherEvent:
    """One trainee action: a question, feedback, movement, or a pause.

    ``topic_tags`` only matter for ASK_QUESTION; ``near`` only for PROXIMITY.
    ``turn`` is stamped by the session when the event is applied.
    """

    kind: TeacherEventKind
    target: str | None = None
    topic_tags: set[str] = field(default_factory=set)
    text: str = ""
    near: bool | None = None
    turn: int | None = None

    def __post_init__(self) -> None:
        if self.kind in TARGETED_KINDS and not self.target:
            raise ValueError(f"{self.kind.value} events require a target student id")
        self.topic_tags = {t.lower() for t in self.topic_tags}

    def to_json_dict(self) -> dict:
        doc: dict = {"kind": self.kind.value}
        if self.target is not None:
            doc["target"] = self.target
        if self.topic_tags:
            doc["topic_tags"] = sorted(self.topic_tags)
        if self.text:
            doc["text"] = self.text
        if self.near is not None:
            doc["near"] = self.near
        if self.turn is not None:
            doc["turn"] = self.turn
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "TeacherEvent":
        if not isinstance(doc, dict):
            raise RosterSchemaError("event must be a JSON object")
        allowed = {"kind", "target", "topic_tags", "text", "near", "turn"}
        unknown = set(doc) - allowed
        if unknown:
            raise RosterSchemaError(f"unknown event fields: {sorted(unknown)}")
        try:
            kind = TeacherEventKind(doc["kind"])
        except KeyError:
            raise RosterSchemaError("event is missing 'kind'") from None
        except ValueError:
            raise RosterSchemaError(f"unknown event kind: {doc['kind']!r}") from None
        try:
            return cls(
                kind=kind,
                target=doc.get("target"),
                topic_tags=set(doc.get("topic_tags", ())),
                text=doc.get("text", ""),
                near=doc.get("near"),
                turn=doc.get("turn"),
            )
        except (TypeError, ValueError) as exc:
            raise RosterSchemaError(str(exc)) from None
