"""The single-pass behavior spin: profile state in, one instruction out.

Each spin consumes at most four uniform draws from the session RNG, in a
fixed order (wildcard, action, failure split, emotion) so a recorded trace
replays exactly:

1. wildcard draw; below the profile's wildcard probability (and with
   off-task remarks allowed by the stage) the action is forced off-task,
2. retrieve the best-matching knowledge node and its effective mastery,
3. action draw against mastery; failures split among the allowed failure
   actions by configured weights,
4. emotion draw over the current intensities, with action-congruent
   channels boosted, then tone lookup, contextual-note matching, and the
   confidence percentage (all deterministic).

No LLM is consulted anywhere here; the instruction is what a performer
backend later acts out.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .config import DEFAULT_FAILURE_SPLIT, SimConfig
from .errors import EmptyContextError, NoFallbackError
from .instructions import ActionKind, BehavioralInstruction, derive_tone
from .profiles import EmotionId, StudentProfile, current_affect, effective_parameter
from .stages import StageCaps
from .store import _tokens, query_nodes

# Channels a successful answer amplifies, and channels a failure amplifies.
POSITIVE_CHANNELS = frozenset(
    {
        EmotionId.JOY,
        EmotionId.PRIDE_ACCOMPLISHMENT,
        EmotionId.ENGAGEMENT,
        EmotionId.EXCITEMENT,
        EmotionId.CURIOSITY,
    }
)
NEGATIVE_CHANNELS = frozenset(
    {EmotionId.CONFUSION, EmotionId.ANXIETY_SHYNESS, EmotionId.FRUSTRATION}
)
_BOOST_FOR_ACTION: dict[ActionKind, frozenset[EmotionId]] = {
    ActionKind.ANSWER_CORRECTLY: POSITIVE_CHANNELS,
    ActionKind.ANSWER_INCORRECTLY: NEGATIVE_CHANNELS,
    ActionKind.REFUSE_TO_ANSWER: NEGATIVE_CHANNELS,
}

# Failure-split sampling order is fixed by enum declaration order.
_FAILURE_ORDER = [
    ActionKind.ANSWER_INCORRECTLY,
    ActionKind.ASK_CLARIFICATION,
    ActionKind.REFUSE_TO_ANSWER,
    ActionKind.STAY_SILENT,
]


class RecordingRandom:
    """Wraps a ``random.Random`` and remembers every uniform draw."""

    def __init__(self, rng: random.Random) -> None:
        self._rng = rng
        self.draws: list[float] = []

    def random(self) -> float:
        value = self._rng.random()
        self.draws.append(value)
        return value


@dataclass
class SpinContext:
    topic_tags: set[str]
    student_id: str
    turn: int
    caps: StageCaps


@dataclass
class SpinTrace:
    """Everything needed to recompute the instruction without the RNG."""

    retrieved_node_ids: list[str]
    mastery_used: float | None
    draws: list[float]
    weights_pre: dict[EmotionId, float]
    weights_post: dict[EmotionId, float]
    wildcard_fired: bool


@dataclass
class SpinOutcome:
    instruction: BehavioralInstruction
    trace: SpinTrace


# ── sampling primitives ─────────────────────────────────────────────


def sample_action(
    mastery: float,
    caps: StageCaps,
    rng,
    failure_split: dict[ActionKind, float] | None = None,
) -> ActionKind:
    """One mastery check, then a weighted failure split when it misses.

    The split runs over the configured failure weights restricted to the
    stage's allowed actions and renormalized. The failure draw is consumed
    whenever the mastery check misses, even if only one candidate remains,
    so traces keep a fixed draw count per branch.
    """
    split = failure_split if failure_split else DEFAULT_FAILURE_SPLIT
    if rng.random() < mastery and ActionKind.ANSWER_CORRECTLY in caps.allowed_actions:
        return ActionKind.ANSWER_CORRECTLY

    candidates = [(a, split[a]) for a in _FAILURE_ORDER if a in split and a in caps.allowed_actions]
    u = rng.random()
    if not candidates:
        return ActionKind.ANSWER_INCORRECTLY
    total = sum(weight for _, weight in candidates)
    acc = 0.0
    for action, weight in candidates:
        acc += weight / total
        if u < acc:
            return action
    return candidates[-1][0]


def conditioned_weights(
    intensities: dict[EmotionId, float], action: ActionKind, boost: float = 1.5
) -> dict[EmotionId, float]:
    """Raw sampling weights: intensities with action-congruent channels boosted."""
    boosted = _BOOST_FOR_ACTION.get(action, frozenset())
    weights = {
        emotion: intensities.get(emotion, 0.0) * (boost if emotion in boosted else 1.0)
        for emotion in EmotionId
    }
    if all(w == 0.0 for w in weights.values()):
        return {emotion: 1.0 for emotion in EmotionId}
    return weights


def sample_emotion(
    intensities: dict[EmotionId, float], action: ActionKind, rng, boost: float = 1.5
) -> EmotionId:
    """One draw over the normalized conditioned weights, in channel order."""
    weights = conditioned_weights(intensities, action, boost)
    total = sum(weights.values())
    u = rng.random()
    acc = 0.0
    for emotion in EmotionId:
        acc += weights[emotion] / total
        if u < acc:
            return emotion
    return list(EmotionId)[-1]


def contextual_note(interests: set[str], ctx_tags: set[str]) -> str | None:
    """Surface the student's closest interest as an analogy hint.

    Interests that share a token with the context tags are preferred (first
    in sorted order); otherwise the student's sorted-first interest is used,
    leaving "if applicable" judgement to the performer. No interests, no
    note.
    """
    if not interests:
        return None
    ctx_tokens: set[str] = set()
    for tag in ctx_tags:
        ctx_tokens |= _tokens(tag)
    matching = sorted(i for i in interests if _tokens(i) & ctx_tokens)
    chosen = matching[0] if matching else sorted(interests)[0]
    return f"Use {chosen} analogy if applicable"


# ── the spin itself ─────────────────────────────────────────────────


def spin(
    profile: StudentProfile,
    instances: list,
    ctx: SpinContext,
    rng: random.Random,
    config: SimConfig | None = None,
) -> SpinOutcome:
    """Produce one behavioral instruction for the addressed student.

    Raises ``EmptyContextError`` when the context has no tags and the
    profile lacks a fallback node; propagates ``NoFallbackError`` when tags
    were given but nothing matches and no fallback exists.
    """
    cfg = config if config is not None else SimConfig()
    recorder = RecordingRandom(rng)

    # (1) wildcard
    wildcard_draw = recorder.random()
    wildcard_allowed = ActionKind.OFF_TASK_REMARK in ctx.caps.allowed_actions
    wildcard_fired = wildcard_allowed and wildcard_draw < profile.wildcard_probability

    # (2) retrieval
    try:
        hits = query_nodes(profile, ctx.topic_tags, k=1)
    except NoFallbackError:
        if not ctx.topic_tags:
            raise EmptyContextError(
                f"no topic tags and no fallback node for {profile.student_id!r}"
            ) from None
        raise
    top = hits[0]
    mastery = effective_parameter(profile, instances, f"cognitive.{top.node_id}.mastery")

    # (3) action
    if wildcard_fired:
        action = ActionKind.OFF_TASK_REMARK
    else:
        action = sample_action(mastery, ctx.caps, recorder, cfg.failure_split)

    # (4) emotion, then the deterministic tail
    intensities = current_affect(profile, instances)
    emotion = sample_emotion(intensities, action, recorder, cfg.emotion_boost)
    tone = derive_tone(emotion, profile.behavioral)
    note = contextual_note(profile.behavioral.interests, ctx.topic_tags)
    engagement = effective_parameter(profile, instances, "affective.engagement")
    confidence = round(100 * engagement)

    instruction = BehavioralInstruction(
        action=action,
        confidence_pct=confidence,
        emotion=emotion,
        tone=tone,
        contextual_note=note,
    )
    trace = SpinTrace(
        retrieved_node_ids=[hit.node_id for hit in hits],
        mastery_used=mastery,
        draws=recorder.draws,
        weights_pre=dict(intensities),
        weights_post=conditioned_weights(intensities, action, cfg.emotion_boost),
        wildcard_fired=wildcard_fired,
    )
    return SpinOutcome(instruction=instruction, trace=trace)
