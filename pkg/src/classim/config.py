"""Simulator configuration: overridable constants with paper-faithful defaults."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import RosterSchemaError
from .instructions import ActionKind
from .profiles import Effect
from .stages import DEFAULT_STAGE_CAPS, RealismStage, StageCaps

# Built-in modifier responses used when a profile has no explicit rule for
# the trigger.
DEFAULT_COMPLIMENT_EFFECTS = (
    Effect("affective.pride_accomplishment", 0.10),
    Effect("affective.anxiety_shyness", -0.05),
)
DEFAULT_CRITIQUE_EFFECTS = (
    Effect("affective.engagement", -0.10),
    Effect("affective.resentment", 0.10),
)

DEFAULT_FAILURE_SPLIT = {
    ActionKind.ANSWER_INCORRECTLY: 0.6,
    ActionKind.ASK_CLARIFICATION: 0.3,
    ActionKind.REFUSE_TO_ANSWER: 0.1,
}


@dataclass
class PerformerSettings:
    backend: str = "template"
    url: str = ""
    api_key: str = ""
    model: str = "gpt-4o-mini"
    timeout_ms: int = 5000
    temperature: float = 0.7

    def with_env_overrides(self) -> "PerformerSettings":
        """Environment variables win over file/config values."""
        return PerformerSettings(
            backend=os.environ.get("PERFORMER_BACKEND", self.backend),
            url=os.environ.get("PERFORMER_URL", self.url),
            api_key=os.environ.get("PERFORMER_API_KEY", self.api_key),
            model=os.environ.get("PERFORMER_MODEL", self.model),
            timeout_ms=int(os.environ.get("PERFORMER_TIMEOUT_MS", self.timeout_ms)),
            temperature=self.temperature,
        )


@dataclass
class SimConfig:
    # action sampling
    failure_split: dict[ActionKind, float] = field(
        default_factory=lambda: dict(DEFAULT_FAILURE_SPLIT)
    )
    # emotion conditioning multiplier applied to action-congruent channels
    emotion_boost: float = 1.5
    # modifier defaults
    default_ttl_turns: int = 4
    compliment_effects: tuple[Effect, ...] = DEFAULT_COMPLIMENT_EFFECTS
    critique_effects: tuple[Effect, ...] = DEFAULT_CRITIQUE_EFFECTS
    # peer influence
    peer_engagement_threshold: float = 0.30
    peer_coupling: float = 0.05
    # spins for students the event does not address
    wildcard_for_unaddressed: bool = False
    # how many trailing transcript entries a performer prompt may see
    transcript_context_turns: int = 6
    # stage cap overrides
    stage_caps: dict[RealismStage, StageCaps] = field(
        default_factory=lambda: dict(DEFAULT_STAGE_CAPS)
    )
    performer: PerformerSettings = field(default_factory=PerformerSettings)

    def to_json_dict(self) -> dict:
        return {
            "failure_split": {k.value: v for k, v in self.failure_split.items()},
            "emotion_boost": self.emotion_boost,
            "default_ttl_turns": self.default_ttl_turns,
            "compliment_effects": [{"path": e.path, "delta": e.delta} for e in self.compliment_effects],
            "critique_effects": [{"path": e.path, "delta": e.delta} for e in self.critique_effects],
            "peer_engagement_threshold": self.peer_engagement_threshold,
            "peer_coupling": self.peer_coupling,
            "wildcard_for_unaddressed": self.wildcard_for_unaddressed,
            "transcript_context_turns": self.transcript_context_turns,
            "stage_caps": {
                stage.value: {
                    "max_volatility": caps.max_volatility if math.isfinite(caps.max_volatility) else None,
                    "exaggeration_factor": caps.exaggeration_factor,
                    "allowed_actions": sorted(a.value for a in caps.allowed_actions),
                    "max_roster_active": caps.max_roster_active,
                }
                for stage, caps in self.stage_caps.items()
            },
            "performer": {
                "backend": self.performer.backend,
                "url": self.performer.url,
                "api_key": self.performer.api_key,
                "model": self.performer.model,
                "timeout_ms": self.performer.timeout_ms,
                "temperature": self.performer.temperature,
            },
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SimConfig":
        if not isinstance(doc, dict):
            raise RosterSchemaError("config must be a JSON object")
        config = cls()
        known = set(config.to_json_dict())
        unknown = set(doc) - known
        if unknown:
            raise RosterSchemaError(f"config has unknown fields: {sorted(unknown)}")
        if "failure_split" in doc:
            config.failure_split = {ActionKind(k): float(v) for k, v in doc["failure_split"].items()}
        if "emotion_boost" in doc:
            config.emotion_boost = float(doc["emotion_boost"])
        if "default_ttl_turns" in doc:
            config.default_ttl_turns = int(doc["default_ttl_turns"])
        if "compliment_effects" in doc:
            config.compliment_effects = tuple(
                Effect(e["path"], float(e["delta"])) for e in doc["compliment_effects"]
            )
        if "critique_effects" in doc:
            config.critique_effects = tuple(
                Effect(e["path"], float(e["delta"])) for e in doc["critique_effects"]
            )
        if "peer_engagement_threshold" in doc:
            config.peer_engagement_threshold = float(doc["peer_engagement_threshold"])
        if "peer_coupling" in doc:
            config.peer_coupling = float(doc["peer_coupling"])
        if "wildcard_for_unaddressed" in doc:
            config.wildcard_for_unaddressed = bool(doc["wildcard_for_unaddressed"])
        if "transcript_context_turns" in doc:
            config.transcript_context_turns = int(doc["transcript_context_turns"])
        if "stage_caps" in doc:
            caps = dict(DEFAULT_STAGE_CAPS)
            for name, spec in doc["stage_caps"].items():
                stage = RealismStage(name)
                base = caps[stage]
                raw_vol = spec.get("max_volatility", base.max_volatility)
                caps[stage] = StageCaps(
                    max_volatility=math.inf if raw_vol is None else float(raw_vol),
                    exaggeration_factor=float(spec.get("exaggeration_factor", base.exaggeration_factor)),
                    allowed_actions=frozenset(
                        ActionKind(a) for a in spec.get(
                            "allowed_actions", [a.value for a in base.allowed_actions]
                        )
                    ),
                    max_roster_active=int(spec.get("max_roster_active", base.max_roster_active)),
                )
            config.stage_caps = caps
        if "performer" in doc:
            base = PerformerSettings()
            spec = doc["performer"]
            config.performer = PerformerSettings(
                backend=str(spec.get("backend", base.backend)),
                url=str(spec.get("url", base.url)),
                api_key=str(spec.get("api_key", base.api_key)),
                model=str(spec.get("model", base.model)),
                timeout_ms=int(spec.get("timeout_ms", base.timeout_ms)),
                temperature=float(spec.get("temperature", base.temperature)),
            )
        return config

    @classmethod
    def load(cls, path: str | Path) -> "SimConfig":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise RosterSchemaError(f"{path}: not valid JSON ({exc})") from None
        return cls.from_json_dict(doc)
