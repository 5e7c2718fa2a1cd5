"""Roster persistence and per-student knowledge retrieval.

The on-disk roster is JSON with an explicit ``schema_version``; the loader is
strict (unknown fields are rejected, all ten emotion channels are required)
so that a roster that loads is a roster that behaves. Retrieval is plain
lexical scoring over topic tags: cheap, deterministic, and good enough to
pick the node a question is about.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .errors import NoFallbackError, RosterSchemaError, RosterValidationError
from .events import TeacherEventKind
from .profiles import (
    AffectiveState,
    BehavioralTraits,
    Effect,
    EmotionId,
    KnowledgeNode,
    ModifierRule,
    SocialLink,
    StudentProfile,
    ValidationReport,
    validate_profile,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# Tag that marks a profile's designated fallback node.
FALLBACK_TAG = "general"

# Score contribution of a partial (token-level) tag overlap.
PARTIAL_WEIGHT = 0.5


@dataclass
class Roster:
    roster_id: str
    students: list[StudentProfile]
    schema_version: int = SCHEMA_VERSION

    def by_id(self, student_id: str) -> StudentProfile | None:
        for student in self.students:
            if student.student_id == student_id:
                return student
        return None


@dataclass
class RetrievalHit:
    node_id: str
    score: float
    matched_tags: set[str] = field(default_factory=set)


# ── retrieval ───────────────────────────────────────────────────────


@lru_cache(maxsize=4096)
def _tokens(tag: str) -> frozenset[str]:
    return frozenset(t for t in re.split(r"[^a-z0-9]+", tag.lower()) if t)


def query_nodes(profile: StudentProfile, ctx_tags: set[str], k: int = 1) -> list[RetrievalHit]:
    """Top-k knowledge nodes for a set of context tags.

    Score per node: exact tag matches count 1 each; pairs of non-identical
    tags that share a token count ``PARTIAL_WEIGHT`` each. Ties break on
    node_id ascending. When nothing scores above zero, the profile's
    fallback node (tagged ``general``) is returned; a profile without one
    raises ``NoFallbackError``.
    """
    ctx = {t.lower() for t in ctx_tags}
    ctx_by_token: dict[str, set[str]] = {}
    for tag in ctx:
        for token in _tokens(tag):
            ctx_by_token.setdefault(token, set()).add(tag)

    hits: list[RetrievalHit] = []
    for node in profile.cognitive:
        exact = node.topic_tags & ctx
        score = float(len(exact))
        matched = set(exact)
        for tag in node.topic_tags - ctx:
            partners: set[str] = set()
            for token in _tokens(tag):
                partners |= ctx_by_token.get(token, set())
            partners -= node.topic_tags
            if partners:
                score += PARTIAL_WEIGHT * len(partners)
                matched.add(tag)
        if score > 0.0:
            hits.append(RetrievalHit(node.node_id, score, matched))

    hits.sort(key=lambda h: (-h.score, h.node_id))
    if hits:
        return hits[:k]

    for node in profile.cognitive:
        if FALLBACK_TAG in node.topic_tags:
            return [RetrievalHit(node.node_id, 0.0, set())]
    raise NoFallbackError(
        f"no node of {profile.student_id!r} matches {sorted(ctx)!r} and none is tagged {FALLBACK_TAG!r}"
    )


# ── roster parsing ──────────────────────────────────────────────────


def _require_keys(doc: dict, required: set[str], optional: set[str], where: str) -> None:
    if not isinstance(doc, dict):
        raise RosterSchemaError(f"{where} must be a JSON object")
    missing = required - set(doc)
    if missing:
        raise RosterSchemaError(f"{where} is missing fields: {sorted(missing)}")
    unknown = set(doc) - required - optional
    if unknown:
        raise RosterSchemaError(f"{where} has unknown fields: {sorted(unknown)}")


def _parse_node(doc: dict, where: str) -> KnowledgeNode:
    _require_keys(doc, {"node_id", "topic_tags", "description", "mastery"}, {"prerequisites"}, where)
    return KnowledgeNode(
        node_id=str(doc["node_id"]),
        topic_tags=set(doc["topic_tags"]),
        description=str(doc["description"]),
        mastery=float(doc["mastery"]),
        prerequisites=set(doc.get("prerequisites", ())),
    )


def _parse_affective(doc: dict, where: str) -> AffectiveState:
    _require_keys(doc, {e.value for e in EmotionId}, set(), where)
    return AffectiveState(baseline={EmotionId(key): float(value) for key, value in doc.items()})


def _parse_behavioral(doc: dict, where: str) -> BehavioralTraits:
    _require_keys(doc, {"openness_to_feedback"}, {"interests", "social_links"}, where)
    links = []
    for i, link in enumerate(doc.get("social_links", ())):
        _require_keys(link, {"peer_id", "affinity"}, set(), f"{where}.social_links[{i}]")
        links.append(SocialLink(peer_id=str(link["peer_id"]), affinity=float(link["affinity"])))
    return BehavioralTraits(
        openness_to_feedback=float(doc["openness_to_feedback"]),
        interests=set(doc.get("interests", ())),
        social_links=links,
    )


def _parse_rule(doc: dict, where: str) -> ModifierRule:
    _require_keys(doc, {"rule_id", "trigger", "effects"}, {"ttl_turns", "target"}, where)
    try:
        trigger = TeacherEventKind(doc["trigger"])
    except ValueError:
        raise RosterSchemaError(f"{where} has unknown trigger {doc['trigger']!r}") from None
    effects = []
    for i, effect in enumerate(doc["effects"]):
        _require_keys(effect, {"path", "delta"}, set(), f"{where}.effects[{i}]")
        effects.append(Effect(path=str(effect["path"]), delta=float(effect["delta"])))
    return ModifierRule(
        rule_id=str(doc["rule_id"]),
        trigger=trigger,
        effects=effects,
        ttl_turns=int(doc.get("ttl_turns", 4)),
        target=doc.get("target"),
    )


def parse_profile(doc: dict, where: str = "student") -> StudentProfile:
    _require_keys(
        doc,
        {"student_id", "display_name", "persona_blurb", "cognitive", "affective", "behavioral"},
        {"modifiers", "wildcard_probability"},
        where,
    )
    student_id = str(doc["student_id"])
    return StudentProfile(
        student_id=student_id,
        display_name=str(doc["display_name"]),
        persona_blurb=str(doc["persona_blurb"]),
        cognitive=[_parse_node(n, f"{where}.cognitive[{i}]") for i, n in enumerate(doc["cognitive"])],
        affective=_parse_affective(doc["affective"], f"{where}.affective"),
        behavioral=_parse_behavioral(doc["behavioral"], f"{where}.behavioral"),
        modifiers=[_parse_rule(r, f"{where}.modifiers[{i}]") for i, r in enumerate(doc.get("modifiers", ()))],
        wildcard_probability=float(doc.get("wildcard_probability", 0.02)),
    )


def parse_roster(doc: dict) -> Roster:
    """Strictly parse and validate a roster document."""
    _require_keys(doc, {"schema_version", "roster_id", "students"}, set(), "roster")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise RosterSchemaError(
            f"unsupported schema_version {doc['schema_version']!r} (expected {SCHEMA_VERSION})"
        )
    students = [
        parse_profile(s, f"students[{i}]") for i, s in enumerate(doc["students"])
    ]

    combined = ValidationReport()
    seen: set[str] = set()
    for profile in students:
        if profile.student_id in seen:
            combined.add(profile.student_id, "DUPLICATE_ID", "student ids must be unique in a roster")
        seen.add(profile.student_id)
        report = validate_profile(profile)
        for issue in report.issues:
            combined.add(f"{profile.student_id}.{issue.path}", issue.code, issue.message)
    if not combined.ok:
        raise RosterValidationError(
            f"roster {doc['roster_id']!r} has {len(combined.issues)} invalid field(s)", combined
        )
    return Roster(roster_id=str(doc["roster_id"]), students=students)


def load_roster(path: str | Path) -> Roster:
    """Load, parse, and validate a roster file."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise RosterSchemaError(f"{path}: not valid JSON ({exc})") from None
    roster = parse_roster(doc)
    logger.info("loaded roster %s with %d student(s)", roster.roster_id, len(roster.students))
    return roster


# ── roster serialization (inverse of parsing) ───────────────────────


def profile_to_json(profile: StudentProfile) -> dict:
    doc: dict = {
        "student_id": profile.student_id,
        "display_name": profile.display_name,
        "persona_blurb": profile.persona_blurb,
        "cognitive": [
            {
                "node_id": node.node_id,
                "topic_tags": sorted(node.topic_tags),
                "description": node.description,
                "mastery": node.mastery,
                "prerequisites": sorted(node.prerequisites),
            }
            for node in profile.cognitive
        ],
        "affective": {e.value: profile.affective.baseline.get(e, 0.0) for e in EmotionId},
        "behavioral": {
            "openness_to_feedback": profile.behavioral.openness_to_feedback,
            "interests": sorted(profile.behavioral.interests),
            "social_links": [
                {"peer_id": link.peer_id, "affinity": link.affinity}
                for link in profile.behavioral.social_links
            ],
        },
        "modifiers": [
            {
                "rule_id": rule.rule_id,
                "trigger": rule.trigger.value,
                "effects": [{"path": e.path, "delta": e.delta} for e in rule.effects],
                "ttl_turns": rule.ttl_turns,
                **({"target": rule.target} if rule.target is not None else {}),
            }
            for rule in profile.modifiers
        ],
        "wildcard_probability": profile.wildcard_probability,
    }
    return doc


def roster_to_json(roster: Roster) -> dict:
    return {
        "schema_version": roster.schema_version,
        "roster_id": roster.roster_id,
        "students": [profile_to_json(p) for p in roster.students],
    }


# ── session log IO ──────────────────────────────────────────────────


def canonical_json(doc: dict) -> str:
    """Stable single-line rendering used everywhere byte-identity matters."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_jsonl(path: str | Path, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(canonical_json(record) + "\n")


def read_jsonl(path: str | Path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records
