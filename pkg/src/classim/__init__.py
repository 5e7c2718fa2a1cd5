"""classim: a seeded, single-pass classroom simulator for teacher training.

Student behavior comes from a lightweight probabilistic engine over layered
profiles (knowledge graph, emotion intensities, behavioral traits, decaying
modifiers); a language model, when configured at all, only performs the
instruction the engine already decided on.
"""

from .benchmark import BenchmarkConfig, BenchmarkReport, run_benchmark
from .config import PerformerSettings, SimConfig
from .errors import (
    EmptyContextError,
    InstructionParseError,
    NoFallbackError,
    PerformerError,
    RosterSchemaError,
    RosterValidationError,
    SimulationError,
    UnknownPathError,
    UnknownSessionError,
    UnknownTargetError,
)
from .events import TeacherEvent, TeacherEventKind
from .instructions import (
    ActionKind,
    BehavioralInstruction,
    ToneTag,
    derive_tone,
    parse_instruction,
    serialize_instruction,
)
from .modifiers import ModifierInstance, apply_event, propagate_peer_influence, tick_decay
from .performer import (
    ExternalBackend,
    PerformerRequest,
    TemplateBackend,
    Utterance,
    build_prompt,
    perform,
)
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
    current_affect,
    effective_parameter,
    validate_profile,
    volatility_score,
)
from .session import ClassroomSession, ReplayResult, create_session, replay_log
from .spin import SpinContext, SpinOutcome, sample_action, sample_emotion, spin
from .stages import (
    RealismStage,
    StageCaps,
    TraineeMetrics,
    clamp_to_stage,
    evaluate_progression,
    stage_caps,
)
from .store import RetrievalHit, Roster, load_roster, parse_roster, query_nodes, roster_to_json

__version__ = "0.1.0"

__all__ = [
    "ActionKind",
    "AffectiveState",
    "BehavioralInstruction",
    "BehavioralTraits",
    "BenchmarkConfig",
    "BenchmarkReport",
    "ClassroomSession",
    "Effect",
    "EmotionId",
    "EmptyContextError",
    "ExternalBackend",
    "InstructionParseError",
    "KnowledgeNode",
    "ModifierInstance",
    "ModifierRule",
    "NoFallbackError",
    "PerformerError",
    "PerformerRequest",
    "PerformerSettings",
    "RealismStage",
    "ReplayResult",
    "RetrievalHit",
    "Roster",
    "RosterSchemaError",
    "RosterValidationError",
    "SimConfig",
    "SimulationError",
    "SocialLink",
    "SpinContext",
    "SpinOutcome",
    "StageCaps",
    "StudentProfile",
    "TeacherEvent",
    "TeacherEventKind",
    "TemplateBackend",
    "ToneTag",
    "TraineeMetrics",
    "UnknownPathError",
    "UnknownSessionError",
    "UnknownTargetError",
    "Utterance",
    "ValidationReport",
    "apply_event",
    "build_prompt",
    "clamp_to_stage",
    "create_session",
    "current_affect",
    "derive_tone",
    "effective_parameter",
    "evaluate_progression",
    "load_roster",
    "parse_instruction",
    "parse_roster",
    "perform",
    "propagate_peer_influence",
    "query_nodes",
    "replay_log",
    "roster_to_json",
    "run_benchmark",
    "sample_action",
    "sample_emotion",
    "serialize_instruction",
    "spin",
    "stage_caps",
    "tick_decay",
    "validate_profile",
    "volatility_score",
]
