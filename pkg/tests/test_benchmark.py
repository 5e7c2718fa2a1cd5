from __future__ import annotations

from classim import BenchmarkConfig, run_benchmark
from classim.benchmark import MultiStageBackend, SleepingCountingBackend, _bench_roster
from classim.performer import PerformerRequest
from classim.instructions import ActionKind, BehavioralInstruction, ToneTag
from classim.profiles import EmotionId


def _request() -> PerformerRequest:
    return PerformerRequest(
        instruction=BehavioralInstruction(
            action=ActionKind.ANSWER_CORRECTLY,
            confidence_pct=50,
            emotion=EmotionId.JOY,
            tone=ToneTag.EAGER,
        ),
        persona_blurb="bench",
        answer_text="42",
    )


def test_counting_backend_counts_every_call():
    backend = SleepingCountingBackend(per_call_latency_ms=0.0)
    for _ in range(4):
        backend.perform(_request())
    assert backend.calls == 4


def test_multi_stage_backend_multiplies_calls():
    counter = SleepingCountingBackend(per_call_latency_ms=0.0)
    wrapper = MultiStageBackend(counter, stages=2, beam=3)
    utterance = wrapper.perform(_request())
    assert counter.calls == 6
    assert utterance.text == "It's 42! I got this!"


def test_bench_roster_always_answers():
    roster = _bench_roster()
    (student,) = roster.students
    assert student.cognitive[0].description == "42"
    assert student.wildcard_probability == 0.0


def test_report_call_counts_are_exact():
    config = BenchmarkConfig(per_call_latency_ms=2.0, stages=2, beam=2, turns=3)
    report = run_benchmark(config)
    assert report.single.performer_calls == 3
    assert report.baseline.performer_calls == 12
    assert report.single.calls_per_turn == 1.0
    assert report.baseline.calls_per_turn == 4.0
    assert report.single.label == "single-call"
    assert report.baseline.label == "multi-stage (2x2)"


def test_speedup_tracks_call_ratio():
    # 5 ms per call keeps the sleep dominant over per-turn bookkeeping, so
    # the measured ratio should sit near stages * beam = 4.
    report = run_benchmark(BenchmarkConfig(per_call_latency_ms=5.0, stages=2, beam=2, turns=3))
    assert report.baseline.wall_ms > report.single.wall_ms
    assert 2.0 < report.speedup < 6.0


def test_report_serializes_to_plain_json():
    report = run_benchmark(BenchmarkConfig(per_call_latency_ms=0.0, stages=2, beam=2, turns=2))
    doc = report.to_json_dict()
    assert doc["config"] == {
        "per_call_latency_ms": 0.0,
        "stages": 2,
        "beam": 2,
        "turns": 2,
        "seed": 7,
    }
    assert set(doc["single"]) == {"label", "performer_calls", "calls_per_turn", "wall_ms"}
    assert doc["speedup"] > 0.0
