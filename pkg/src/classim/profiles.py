"""Layered student profiles and the arithmetic over their parameters.

A profile stacks four layers:

* cognitive    -- a knowledge graph of nodes with mastery probabilities and
                  prerequisite (DAG) edges,
* affective    -- ten independent emotion intensities in [0, 1] (they are
                  weights, not a distribution, so they need not sum to 1),
* behavioral   -- openness to feedback, interest tags, and social links,
* modifiers    -- rules that turn teacher events into temporary deltas.

Profiles are treated as immutable snapshots: sessions layer decaying
``ModifierInstance`` deltas on top instead of editing baselines, and
``effective_parameter`` is the single place that combines the two.
All parameter arithmetic is quantized to ``PRECISION`` decimal places so a
parameter returns to its exact baseline once every delta expires.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from graphlib import CycleError, TopologicalSorter

from .errors import UnknownPathError
from .events import TeacherEventKind

# Decimal places kept by every parameter computation.
PRECISION = 4


def quantize(value: float) -> float:
    """Round to the fixed parameter precision."""
    return round(value, PRECISION)


def clamp01(value: float) -> float:
    return 0.0 if value < 0.0 else 1.0 if value > 1.0 else value


class EmotionId(str, Enum):
    """The ten emotion channels; declaration order is the sampling order."""

    JOY = "joy"
    ENGAGEMENT = "engagement"
    CONFUSION = "confusion"
    ANXIETY_SHYNESS = "anxiety_shyness"
    PRIDE_ACCOMPLISHMENT = "pride_accomplishment"
    RESENTMENT = "resentment"
    BOREDOM = "boredom"
    FRUSTRATION = "frustration"
    CURIOSITY = "curiosity"
    EXCITEMENT = "excitement"

    @property
    def display_name(self) -> str:
        return self.value.replace("_", " ").title()


# ── domain types ────────────────────────────────────────────────────


@dataclass
class KnowledgeNode:
    """One concept in a student's knowledge graph."""

    node_id: str
    topic_tags: set[str]
    description: str
    mastery: float
    prerequisites: set[str] = field(default_factory=set)


@dataclass
class AffectiveState:
    """Baseline and current intensity per emotion channel.

    ``current`` equals ``baseline`` whenever no modifier instance is active;
    sessions refresh it from the effective values each turn.
    """

    baseline: dict[EmotionId, float]
    current: dict[EmotionId, float] | None = None

    def __post_init__(self) -> None:
        if self.current is None:
            self.current = dict(self.baseline)


@dataclass
class SocialLink:
    peer_id: str
    affinity: float  # -1 hostile .. +1 close


@dataclass
class BehavioralTraits:
    openness_to_feedback: float
    interests: set[str] = field(default_factory=set)
    social_links: list[SocialLink] = field(default_factory=list)


@dataclass
class Effect:
    """One delta applied by a modifier rule, addressed by parameter path."""

    path: str
    delta: float


@dataclass
class ModifierRule:
    """Maps a teacher event kind to temporary parameter deltas.

    ``target`` optionally narrows the trigger to events addressed at a
    specific student id (so a profile can react to what happens to a peer);
    when None, targeted events must address the rule's owner.
    """

    rule_id: str
    trigger: TeacherEventKind
    effects: list[Effect]
    ttl_turns: int = 4
    target: str | None = None


@dataclass
class StudentProfile:
    student_id: str
    display_name: str
    persona_blurb: str
    cognitive: list[KnowledgeNode]
    affective: AffectiveState
    behavioral: BehavioralTraits
    modifiers: list[ModifierRule] = field(default_factory=list)
    wildcard_probability: float = 0.02

    def node(self, node_id: str) -> KnowledgeNode | None:
        for node in self.cognitive:
            if node.node_id == node_id:
                return node
        return None


@dataclass
class ValidationIssue:
    path: str
    code: str
    message: str


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, path: str, code: str, message: str) -> None:
        self.issues.append(ValidationIssue(path, code, message))


# ── validation ──────────────────────────────────────────────────────

_EMOTION_KEYS = {e.value for e in EmotionId}


def _is_lower(tag: str) -> bool:
    return tag == tag.lower()


def validate_profile(profile: StudentProfile) -> ValidationReport:
    """Check every profile invariant; report issues with stable codes."""
    report = ValidationReport()

    # cognitive layer
    seen_ids: set[str] = set()
    graph: dict[str, set[str]] = {}
    for node in profile.cognitive:
        prefix = f"cognitive.{node.node_id}"
        if node.node_id in seen_ids:
            report.add(prefix, "DUPLICATE_ID", "node ids must be unique within a profile")
        seen_ids.add(node.node_id)
        graph[node.node_id] = set(node.prerequisites)
        if not 0.0 <= node.mastery <= 1.0:
            report.add(f"{prefix}.mastery", "OUT_OF_RANGE", f"mastery {node.mastery} outside [0, 1]")
        if not node.topic_tags:
            report.add(f"{prefix}.topic_tags", "EMPTY_TAGS", "nodes need at least one topic tag")
        for tag in node.topic_tags:
            if not _is_lower(tag):
                report.add(f"{prefix}.topic_tags", "NOT_LOWERCASE", f"tag {tag!r} must be lowercase")
    for node in profile.cognitive:
        for dep in node.prerequisites:
            if dep not in graph:
                report.add(
                    f"cognitive.{node.node_id}.prerequisites",
                    "UNKNOWN_PREREQ",
                    f"prerequisite {dep!r} is not a node in this profile",
                )
    try:
        TopologicalSorter(graph).prepare()
    except CycleError:
        report.add("cognitive", "CYCLIC_GRAPH", "prerequisite edges must form a DAG")

    # affective layer
    for label, mapping in (("baseline", profile.affective.baseline), ("current", profile.affective.current or {})):
        for emotion, value in mapping.items():
            if not 0.0 <= value <= 1.0:
                report.add(
                    f"affective.{emotion.value}.{label}",
                    "OUT_OF_RANGE",
                    f"intensity {value} outside [0, 1]",
                )

    # behavioral layer
    if not 0.0 <= profile.behavioral.openness_to_feedback <= 1.0:
        report.add("behavioral.openness_to_feedback", "OUT_OF_RANGE", "openness outside [0, 1]")
    for interest in profile.behavioral.interests:
        if not _is_lower(interest):
            report.add("behavioral.interests", "NOT_LOWERCASE", f"interest {interest!r} must be lowercase")
    for i, link in enumerate(profile.behavioral.social_links):
        if not -1.0 <= link.affinity <= 1.0:
            report.add(f"behavioral.social_links[{i}]", "OUT_OF_RANGE", f"affinity {link.affinity} outside [-1, 1]")
        if link.peer_id == profile.student_id:
            report.add(f"behavioral.social_links[{i}]", "SELF_LINK", "students cannot link to themselves")

    # modifier rules
    for rule in profile.modifiers:
        prefix = f"modifiers.{rule.rule_id}"
        if rule.ttl_turns < 1:
            report.add(f"{prefix}.ttl_turns", "OUT_OF_RANGE", "ttl must be at least 1 turn")
        for effect in rule.effects:
            if abs(effect.delta) > 1.0:
                report.add(f"{prefix}.effects", "OUT_OF_RANGE", f"|delta| {abs(effect.delta)} exceeds 1")
            try:
                resolve_baseline(profile, effect.path)
            except UnknownPathError:
                report.add(f"{prefix}.effects", "UNKNOWN_PATH", f"path {effect.path!r} does not resolve")

    # wildcard
    if not 0.0 <= profile.wildcard_probability <= 0.1:
        report.add("wildcard_probability", "OUT_OF_RANGE", "wildcard probability outside [0, 0.1]")

    return report


# ── parameter paths ─────────────────────────────────────────────────


def resolve_baseline(profile: StudentProfile, path: str) -> float:
    """Return the baseline value behind a parameter path.

    Paths: ``affective.<emotion>``, ``behavioral.openness_to_feedback``,
    ``cognitive.<node_id>.mastery``.
    """
    parts = path.split(".")
    if len(parts) == 2 and parts[0] == "affective" and parts[1] in _EMOTION_KEYS:
        return profile.affective.baseline.get(EmotionId(parts[1]), 0.0)
    if len(parts) == 2 and parts[0] == "behavioral" and parts[1] == "openness_to_feedback":
        return profile.behavioral.openness_to_feedback
    if len(parts) == 3 and parts[0] == "cognitive" and parts[2] == "mastery":
        node = profile.node(parts[1])
        if node is not None:
            return node.mastery
    raise UnknownPathError(f"parameter path {path!r} does not resolve")


def effective_parameter(profile: StudentProfile, instances: list, path: str) -> float:
    """Baseline plus every active decayed delta, clamped to [0, 1].

    ``instances`` is the student's active ``ModifierInstance`` list; only
    effects addressed at ``path`` contribute.
    """
    value = resolve_baseline(profile, path)
    for instance in instances:
        for effect in instance.current_effects:
            if effect.path == path:
                value += effect.delta
    return clamp01(quantize(value))


def current_affect(profile: StudentProfile, instances: list) -> dict[EmotionId, float]:
    """Effective intensity for every emotion channel."""
    return {
        emotion: effective_parameter(profile, instances, f"affective.{emotion.value}")
        for emotion in EmotionId
    }


def volatility_score(profile: StudentProfile) -> float:
    """Total modifier delta mass plus 10x the wildcard probability."""
    mass = sum(abs(effect.delta) for rule in profile.modifiers for effect in rule.effects)
    return mass + 10.0 * profile.wildcard_probability
