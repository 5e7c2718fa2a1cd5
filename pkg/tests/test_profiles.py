from __future__ import annotations

import pytest

from classim import (
    BehavioralTraits,
    Effect,
    EmotionId,
    KnowledgeNode,
    ModifierRule,
    SocialLink,
    TeacherEventKind,
    UnknownPathError,
    current_affect,
    effective_parameter,
    validate_profile,
    volatility_score,
)
from classim.modifiers import ModifierInstance

from conftest import make_affect, make_profile


def _codes(report, code):
    return [issue for issue in report.issues if issue.code == code]


def test_valid_profile_passes(devin):
    report = validate_profile(devin)
    assert report.ok
    assert report.issues == []


def test_mastery_out_of_range_flagged():
    profile = make_profile(
        nodes=[KnowledgeNode(node_id="n1", topic_tags={"x"}, description="", mastery=1.2)]
    )
    report = validate_profile(profile)
    assert not report.ok
    issue = _codes(report, "OUT_OF_RANGE")[0]
    assert issue.path == "cognitive.n1.mastery"


def test_cyclic_prerequisites_flagged():
    profile = make_profile(
        nodes=[
            KnowledgeNode(node_id="a", topic_tags={"a"}, description="", mastery=0.5, prerequisites={"b"}),
            KnowledgeNode(node_id="b", topic_tags={"b"}, description="", mastery=0.5, prerequisites={"a"}),
        ]
    )
    report = validate_profile(profile)
    assert _codes(report, "CYCLIC_GRAPH")


def test_unknown_prerequisite_flagged():
    profile = make_profile(
        nodes=[
            KnowledgeNode(node_id="a", topic_tags={"a"}, description="", mastery=0.5, prerequisites={"ghost"})
        ]
    )
    assert _codes(validate_profile(profile), "UNKNOWN_PREREQ")


def test_tag_invariants_flagged():
    profile = make_profile(
        nodes=[
            KnowledgeNode(node_id="a", topic_tags=set(), description="", mastery=0.5),
            KnowledgeNode(node_id="b", topic_tags={"Mixed"}, description="", mastery=0.5),
        ]
    )
    report = validate_profile(profile)
    assert _codes(report, "EMPTY_TAGS")
    assert _codes(report, "NOT_LOWERCASE")


def test_affective_range_flagged():
    profile = make_profile(affect=make_affect(joy=1.5))
    issue = _codes(validate_profile(profile), "OUT_OF_RANGE")[0]
    assert issue.path == "affective.joy.baseline"


def test_social_link_invariants():
    traits = BehavioralTraits(
        openness_to_feedback=0.5,
        social_links=[SocialLink("s1", 0.5), SocialLink("other", 1.5)],
    )
    report = validate_profile(make_profile("s1", traits=traits))
    assert _codes(report, "SELF_LINK")
    assert _codes(report, "OUT_OF_RANGE")


def test_modifier_rule_invariants():
    rules = [
        ModifierRule(
            rule_id="r1",
            trigger=TeacherEventKind.COMPLIMENT,
            effects=[Effect("affective.joy", 1.5), Effect("affective.nope", 0.1)],
            ttl_turns=0,
        )
    ]
    report = validate_profile(make_profile(modifiers=rules))
    assert _codes(report, "OUT_OF_RANGE")  # delta magnitude and ttl
    assert _codes(report, "UNKNOWN_PATH")


def test_wildcard_probability_range():
    report = validate_profile(make_profile(wildcard=0.5))
    assert _codes(report, "OUT_OF_RANGE")[0].path == "wildcard_probability"


def test_ok_iff_no_issues():
    good = validate_profile(make_profile())
    bad = validate_profile(make_profile(wildcard=0.2))
    assert good.ok and not good.issues
    assert not bad.ok and bad.issues


# ── parameter paths ─────────────────────────────────────────────────


def _instance(path: str, delta: float, remaining: int = 4, ttl: int = 4) -> ModifierInstance:
    return ModifierInstance(
        instance_id="i1",
        rule_id="r1",
        created_turn=0,
        ttl_turns=ttl,
        remaining_turns=remaining,
        effects=[Effect(path, delta)],
    )


def test_effective_parameter_baseline_when_no_instances(devin):
    assert effective_parameter(devin, [], "affective.joy") == 0.95
    assert effective_parameter(devin, [], "cognitive.4x-tables.mastery") == 0.9
    assert effective_parameter(devin, [], "behavioral.openness_to_feedback") == 0.75


def test_effective_parameter_unknown_path(devin):
    with pytest.raises(UnknownPathError):
        effective_parameter(devin, [], "affective.zeal")
    with pytest.raises(UnknownPathError):
        effective_parameter(devin, [], "cognitive.missing.mastery")


def test_effective_parameter_sums_decayed_deltas():
    profile = make_profile(affect=make_affect(engagement=0.6))
    inst = _instance("affective.engagement", 0.1, remaining=3, ttl=4)
    assert effective_parameter(profile, [inst], "affective.engagement") == 0.675


def test_effective_parameter_clamps_both_ends():
    profile = make_profile(affect=make_affect(joy=0.98, engagement=0.02))
    up = _instance("affective.joy", 0.1)
    down = _instance("affective.engagement", -0.04)
    assert effective_parameter(profile, [up], "affective.joy") == 1.0
    assert effective_parameter(profile, [down], "affective.engagement") == 0.0


def test_current_affect_covers_every_channel(devin):
    affect = current_affect(devin, [])
    assert set(affect) == set(EmotionId)
    assert affect[EmotionId.ENGAGEMENT] == 0.85
    # no instances active -> current equals baseline everywhere
    assert affect == {e: devin.affective.baseline[e] for e in EmotionId}


def test_volatility_score_sums_delta_mass_and_wildcard(devin):
    # Devin: |+0.10| + |-0.05| from the compliment rule, wildcard 0.02.
    assert volatility_score(devin) == pytest.approx(0.35)


def test_volatility_score_zero_for_inert_profile():
    assert volatility_score(make_profile()) == 0.0
