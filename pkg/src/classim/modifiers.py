"""Dynamic modifiers: how teacher events bend student parameters over time.

A matching rule pushes a ``ModifierInstance`` at full strength; each end-of-
turn tick decays the instance linearly (delta = original * remaining / ttl)
until it expires and the parameter returns exactly to baseline. The functions
here operate on any state object exposing ``roster``, ``instances`` (student
id -> list of instances), ``turn``, and ``config``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UnknownTargetError
from .events import TARGETED_KINDS, TeacherEvent, TeacherEventKind
from .profiles import Effect, StudentProfile, effective_parameter, quantize


@dataclass
class ModifierInstance:
    """A live, decaying copy of the deltas a rule fired with."""

    instance_id: str
    rule_id: str
    created_turn: int
    ttl_turns: int
    remaining_turns: int
    effects: list[Effect] = field(default_factory=list)  # original magnitudes

    @property
    def current_effects(self) -> list[Effect]:
        scale = self.remaining_turns / self.ttl_turns
        return [Effect(e.path, quantize(e.delta * scale)) for e in self.effects]


def _spawn(state, student_id: str, rule_id: str, effects: list[Effect], ttl: int) -> ModifierInstance:
    existing = state.instances.setdefault(student_id, [])
    seq = sum(1 for inst in existing if inst.created_turn == state.turn)
    instance = ModifierInstance(
        instance_id=f"{student_id}:{rule_id}@{state.turn}.{seq}",
        rule_id=rule_id,
        created_turn=state.turn,
        ttl_turns=ttl,
        remaining_turns=ttl,
        effects=list(effects),
    )
    existing.append(instance)
    return instance


def _rule_matches(rule, profile: StudentProfile, event: TeacherEvent) -> bool:
    if rule.trigger != event.kind:
        return False
    if event.kind in TARGETED_KINDS:
        wanted = rule.target if rule.target is not None else profile.student_id
        return event.target == wanted
    # broadcast kinds (instruction, wait) match only unconditional rules
    return rule.target is None


def apply_event(state, event: TeacherEvent) -> list[ModifierInstance]:
    """Push instances for every rule the event triggers; return them.

    Profiles without an explicit rule for a Compliment or HarshCritique get
    the built-in default response. Events that match nothing leave the state
    bit-identical. Raises ``UnknownTargetError`` for targets not in the
    roster.
    """
    if event.kind in TARGETED_KINDS and state.roster.by_id(event.target) is None:
        raise UnknownTargetError(f"event targets unknown student {event.target!r}")

    created: list[ModifierInstance] = []
    for profile in state.roster.students:
        matched = [rule for rule in profile.modifiers if _rule_matches(rule, profile, event)]
        for rule in matched:
            created.append(_spawn(state, profile.student_id, rule.rule_id, rule.effects, rule.ttl_turns))
        if matched or event.target != profile.student_id:
            continue
        # built-in defaults, only for the addressed student
        has_trigger_rule = any(rule.trigger == event.kind for rule in profile.modifiers)
        if has_trigger_rule:
            continue
        if event.kind is TeacherEventKind.COMPLIMENT:
            created.append(
                _spawn(
                    state,
                    profile.student_id,
                    "default-compliment",
                    list(state.config.compliment_effects),
                    state.config.default_ttl_turns,
                )
            )
        elif event.kind is TeacherEventKind.HARSH_CRITIQUE:
            created.append(
                _spawn(
                    state,
                    profile.student_id,
                    "default-harsh-critique",
                    list(state.config.critique_effects),
                    state.config.default_ttl_turns,
                )
            )
    return created


def tick_decay(state) -> None:
    """Advance every instance one turn; drop the ones that expire."""
    for student_id, active in state.instances.items():
        for instance in active:
            instance.remaining_turns -= 1
        state.instances[student_id] = [i for i in active if i.remaining_turns > 0]


def propagate_peer_influence(state) -> list[ModifierInstance]:
    """Let visible disengagement tug on connected classmates.

    Every student whose effective Engagement sits below the configured
    threshold pulls each peer that links to them: positive affinity costs the
    peer ``affinity * coupling`` Engagement for one turn; negative affinity
    grants the same amount (schadenfreude cuts both ways). Thresholds are
    evaluated against the state before this call so one student's slump
    cannot cascade within a single turn.
    """
    threshold = state.config.peer_engagement_threshold
    coupling = state.config.peer_coupling
    low: set[str] = set()
    for profile in state.roster.students:
        engagement = effective_parameter(
            profile, state.instances.get(profile.student_id, []), "affective.engagement"
        )
        if engagement < threshold:
            low.add(profile.student_id)

    created: list[ModifierInstance] = []
    for profile in state.roster.students:
        for link in profile.behavioral.social_links:
            if link.peer_id not in low or link.affinity == 0.0:
                continue
            delta = quantize(-link.affinity * coupling if link.affinity > 0 else abs(link.affinity) * coupling)
            created.append(
                _spawn(
                    state,
                    profile.student_id,
                    f"peer-influence:{link.peer_id}",
                    [Effect("affective.engagement", delta)],
                    1,
                )
            )
    return created
