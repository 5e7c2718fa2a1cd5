"""Single-call vs multi-stage cost benchmark.

Both pipelines run the same seeded turns against a mock performer that
sleeps a fixed per-call latency and counts invocations. The single-call
pipeline performs once per student turn; the simulated multi-stage baseline
performs ``stages * beam`` times per turn (each refinement stage generates
and evaluates a beam of candidates). Reported wall times are measured, not
derived.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .events import TeacherEvent, TeacherEventKind
from .performer import PerformerRequest, TemplateBackend, Utterance
from .profiles import (
    AffectiveState,
    BehavioralTraits,
    EmotionId,
    KnowledgeNode,
    StudentProfile,
)
from .session import create_session
from .stages import RealismStage
from .store import Roster


@dataclass(frozen=True)
class BenchmarkConfig:
    per_call_latency_ms: float = 100.0
    stages: int = 5
    beam: int = 3
    turns: int = 10
    seed: int = 7


@dataclass
class PipelineStats:
    label: str
    performer_calls: int
    calls_per_turn: float
    wall_ms: float


@dataclass
class BenchmarkReport:
    config: BenchmarkConfig
    single: PipelineStats
    baseline: PipelineStats
    speedup: float

    def to_json_dict(self) -> dict:
        return {
            "config": {
                "per_call_latency_ms": self.config.per_call_latency_ms,
                "stages": self.config.stages,
                "beam": self.config.beam,
                "turns": self.config.turns,
                "seed": self.config.seed,
            },
            "single": vars(self.single),
            "baseline": vars(self.baseline),
            "speedup": self.speedup,
        }


class SleepingCountingBackend:
    """Mock performer: fixed per-call latency, exact call count."""

    backend_id = "mock"

    def __init__(self, per_call_latency_ms: float) -> None:
        self._delay_s = per_call_latency_ms / 1000.0
        self._inner = TemplateBackend()
        self.calls = 0

    def perform(self, request: PerformerRequest) -> Utterance:
        self.calls += 1
        if self._delay_s > 0:
            time.sleep(self._delay_s)
        utterance = self._inner.perform(request)
        utterance.backend_id = self.backend_id
        return utterance


class MultiStageBackend:
    """Simulates a k-stage, b-beam refinement loop around the inner backend."""

    backend_id = "multi-stage"

    def __init__(self, inner: SleepingCountingBackend, stages: int, beam: int) -> None:
        self._inner = inner
        self._rounds = stages * beam

    def perform(self, request: PerformerRequest) -> Utterance:
        utterance = self._inner.perform(request)
        for _ in range(self._rounds - 1):
            utterance = self._inner.perform(request)
        return utterance


def _bench_roster() -> Roster:
    profile = StudentProfile(
        student_id="bench-student",
        display_name="Bench Student",
        persona_blurb="A steady volunteer used for timing runs.",
        cognitive=[
            KnowledgeNode(
                node_id="bench-topic",
                topic_tags={"bench", "general"},
                description="42",
                mastery=0.9,
            )
        ],
        affective=AffectiveState(baseline={e: 0.5 for e in EmotionId}),
        behavioral=BehavioralTraits(openness_to_feedback=0.5),
        wildcard_probability=0.0,
    )
    return Roster(roster_id="bench", students=[profile])


def _run_pipeline(config: BenchmarkConfig, backend, counter: SleepingCountingBackend) -> PipelineStats:
    session = create_session(
        _bench_roster(), stage=RealismStage.STAGE1, seed=config.seed, backend=backend
    )
    counter.calls = 0
    start = time.perf_counter()
    for _ in range(config.turns):
        session.submit_event(
            TeacherEvent(
                kind=TeacherEventKind.ASK_QUESTION,
                target="bench-student",
                topic_tags={"bench"},
                text="What is the answer?",
            )
        )
    wall_ms = (time.perf_counter() - start) * 1000.0
    return PipelineStats(
        label="",
        performer_calls=counter.calls,
        calls_per_turn=counter.calls / config.turns,
        wall_ms=wall_ms,
    )


def run_benchmark(config: BenchmarkConfig | None = None) -> BenchmarkReport:
    cfg = config if config is not None else BenchmarkConfig()

    counter = SleepingCountingBackend(cfg.per_call_latency_ms)
    single = _run_pipeline(cfg, counter, counter)
    single.label = "single-call"

    counter = SleepingCountingBackend(cfg.per_call_latency_ms)
    baseline = _run_pipeline(cfg, MultiStageBackend(counter, cfg.stages, cfg.beam), counter)
    baseline.label = f"multi-stage ({cfg.stages}x{cfg.beam})"

    speedup = baseline.wall_ms / single.wall_ms if single.wall_ms > 0 else float("inf")
    return BenchmarkReport(config=cfg, single=single, baseline=baseline, speedup=speedup)
