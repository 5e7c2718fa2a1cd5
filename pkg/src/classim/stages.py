"""Graduated realism: stage caps, profile clamping, and trainee progression.

Early stages keep students legible and forgiving (few allowed actions, big
exaggerated emotion display, low volatility); later stages lift the caps and
dial the display down toward subtle. Profiles whose volatility exceeds a
stage's cap are scaled down, never rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Final

from .instructions import ActionKind
from .profiles import Effect, ModifierRule, StudentProfile, volatility_score


class RealismStage(str, Enum):
    STAGE1 = "Stage1"
    STAGE2 = "Stage2"
    STAGE3 = "Stage3"

    @property
    def index(self) -> int:
        return _STAGE_ORDER.index(self)


_STAGE_ORDER: Final[tuple[RealismStage, ...]] = (
    RealismStage.STAGE1,
    RealismStage.STAGE2,
    RealismStage.STAGE3,
)


@dataclass(frozen=True)
class StageCaps:
    max_volatility: float
    exaggeration_factor: float
    allowed_actions: frozenset[ActionKind]
    max_roster_active: int


DEFAULT_STAGE_CAPS: Final[dict[RealismStage, StageCaps]] = {
    RealismStage.STAGE1: StageCaps(
        max_volatility=0.2,
        exaggeration_factor=2.0,
        allowed_actions=frozenset(
            {ActionKind.ANSWER_CORRECTLY, ActionKind.ANSWER_INCORRECTLY, ActionKind.ASK_CLARIFICATION}
        ),
        max_roster_active=5,
    ),
    RealismStage.STAGE2: StageCaps(
        max_volatility=0.5,
        exaggeration_factor=1.0,
        allowed_actions=frozenset(
            {
                ActionKind.ANSWER_CORRECTLY,
                ActionKind.ANSWER_INCORRECTLY,
                ActionKind.ASK_CLARIFICATION,
                ActionKind.STAY_SILENT,
            }
        ),
        max_roster_active=15,
    ),
    RealismStage.STAGE3: StageCaps(
        max_volatility=math.inf,
        exaggeration_factor=0.5,
        allowed_actions=frozenset(ActionKind),
        max_roster_active=30,
    ),
}


def stage_caps(stage: RealismStage, overrides: dict[RealismStage, StageCaps] | None = None) -> StageCaps:
    """Caps for a stage, honoring config overrides when present."""
    if overrides and stage in overrides:
        return overrides[stage]
    return DEFAULT_STAGE_CAPS[stage]


def clamp_to_stage(profile: StudentProfile, caps: StageCaps) -> StudentProfile:
    """New profile snapshot whose volatility fits under the stage cap.

    When the profile is over cap, every modifier delta and the wildcard
    probability are scaled by cap/volatility, which preserves the relative
    temperament while shrinking its amplitude. Profiles at or under the cap
    come back unchanged (the same object).
    """
    volatility = volatility_score(profile)
    if volatility <= caps.max_volatility or math.isinf(caps.max_volatility):
        return profile
    scale = caps.max_volatility / volatility
    scaled = _scaled_copy(profile, scale)
    # Float rounding can land a hair over the cap; shave until sound.
    while volatility_score(scaled) > caps.max_volatility:
        scale *= 1.0 - 1e-12
        scaled = _scaled_copy(profile, scale)
    return scaled


def _scaled_copy(profile: StudentProfile, scale: float) -> StudentProfile:
    rules = [
        replace(
            rule,
            effects=[Effect(effect.path, effect.delta * scale) for effect in rule.effects],
        )
        for rule in profile.modifiers
    ]
    return replace(
        profile,
        modifiers=rules,
        wildcard_probability=profile.wildcard_probability * scale,
    )


@dataclass
class TraineeMetrics:
    """Rolling picture of how a trainee is doing at the current stage."""

    sessions_completed: int = 0
    mean_response_latency_ms: float = 0.0
    constructive_event_fraction: float = 0.0
    disruption_resolution_rate: float = 0.0


# Progression gate: enough practice and enough disruptions handled.
MIN_SESSIONS_TO_ADVANCE: Final[int] = 3
MIN_RESOLUTION_RATE: Final[float] = 0.7


def evaluate_progression(metrics: TraineeMetrics, current: RealismStage) -> RealismStage:
    """Next stage for a trainee: at most one step up, never down."""
    if current is RealismStage.STAGE3:
        return current
    if (
        metrics.sessions_completed >= MIN_SESSIONS_TO_ADVANCE
        and metrics.disruption_resolution_rate >= MIN_RESOLUTION_RATE
    ):
        return _STAGE_ORDER[current.index + 1]
    return current
