from __future__ import annotations

from importlib import resources

import pytest

from classim import (
    AffectiveState,
    BehavioralTraits,
    EmotionId,
    KnowledgeNode,
    Roster,
    StudentProfile,
    load_roster,
)


def fixture_path(name: str) -> str:
    return str(resources.files("classim") / "fixtures" / name)


# Flat affect used when a test only cares about one or two channels.
BASE_AFFECT = {e: 0.5 for e in EmotionId}


def make_affect(**overrides: float) -> AffectiveState:
    baseline = dict(BASE_AFFECT)
    for key, value in overrides.items():
        baseline[EmotionId(key)] = value
    return AffectiveState(baseline=baseline)


def make_profile(
    student_id: str = "s1",
    *,
    nodes: list[KnowledgeNode] | None = None,
    affect: AffectiveState | None = None,
    traits: BehavioralTraits | None = None,
    modifiers: list | None = None,
    wildcard: float = 0.0,
) -> StudentProfile:
    return StudentProfile(
        student_id=student_id,
        display_name=student_id.title(),
        persona_blurb=f"Test student {student_id}.",
        cognitive=nodes
        if nodes is not None
        else [
            KnowledgeNode(
                node_id="topic-a",
                topic_tags={"alpha", "numbers"},
                description="7",
                mastery=0.8,
            ),
            KnowledgeNode(node_id="general", topic_tags={"general"}, description="hm", mastery=0.5),
        ],
        affective=affect if affect is not None else make_affect(),
        behavioral=traits if traits is not None else BehavioralTraits(openness_to_feedback=0.5),
        modifiers=modifiers or [],
        wildcard_probability=wildcard,
    )


def make_roster(*profiles: StudentProfile, roster_id: str = "test-roster") -> Roster:
    return Roster(roster_id=roster_id, students=list(profiles))


@pytest.fixture(scope="session")
def demo_roster_path() -> str:
    return fixture_path("demo_roster.json")


@pytest.fixture()
def demo_roster(demo_roster_path: str):
    return load_roster(demo_roster_path)


@pytest.fixture()
def devin(demo_roster):
    return demo_roster.by_id("devin")


class FakeRng:
    """Scripted uniform draws for exercising exact sampling branches."""

    def __init__(self, values: list[float]) -> None:
        self._values = list(values)

    def random(self) -> float:
        return self._values.pop(0)
