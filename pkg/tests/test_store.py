from __future__ import annotations

import json
import random
import re

import pytest

from classim import (
    KnowledgeNode,
    NoFallbackError,
    RosterSchemaError,
    RosterValidationError,
    load_roster,
    parse_roster,
    query_nodes,
    roster_to_json,
)
from classim.store import PARTIAL_WEIGHT

from conftest import make_profile


# ── retrieval ───────────────────────────────────────────────────────


def test_query_ranks_exact_topic_first(devin):
    hits = query_nodes(devin, {"4x", "multiplication", "tables"}, k=2)
    assert [h.node_id for h in hits] == ["4x-tables", "7x-tables"]
    assert hits[0].score == 3.0
    assert hits[1].score == 2.0
    assert hits[0].matched_tags == {"4x", "multiplication", "tables"}


def test_query_breaks_ties_by_node_id():
    profile = make_profile(
        nodes=[
            KnowledgeNode(node_id="zeta", topic_tags={"shared"}, description="", mastery=0.5),
            KnowledgeNode(node_id="alpha", topic_tags={"shared"}, description="", mastery=0.5),
        ]
    )
    hits = query_nodes(profile, {"shared"}, k=2)
    assert [h.node_id for h in hits] == ["alpha", "zeta"]


def test_query_counts_partial_token_overlap():
    profile = make_profile(
        nodes=[KnowledgeNode(node_id="n", topic_tags={"4x-tables"}, description="", mastery=0.5)]
    )
    hits = query_nodes(profile, {"tables"}, k=1)
    assert hits[0].score == PARTIAL_WEIGHT


def test_query_falls_back_to_general_node(devin):
    hits = query_nodes(devin, {"volcanoes"}, k=3)
    assert len(hits) == 1
    assert hits[0].node_id == "general"
    assert hits[0].score == 0.0
    assert hits[0].matched_tags == set()


def test_query_without_fallback_raises():
    profile = make_profile(
        nodes=[KnowledgeNode(node_id="n", topic_tags={"math"}, description="", mastery=0.5)]
    )
    with pytest.raises(NoFallbackError):
        query_nodes(profile, {"volcanoes"})


def _brute_force_score(node_tags: set[str], ctx: set[str]) -> float:
    def tokens(tag: str) -> set[str]:
        return {t for t in re.split(r"[^a-z0-9]+", tag.lower()) if t}

    exact = len(node_tags & ctx)
    partial = sum(
        1
        for t in node_tags - ctx
        for c in ctx - node_tags
        if tokens(t) & tokens(c)
    )
    return exact + PARTIAL_WEIGHT * partial


def test_query_scores_match_brute_force_oracle():
    rng = random.Random(4242)
    vocab = ["4x", "7x", "tables", "multiplication", "math-facts", "reading", "general",
             "word-problems", "fractions", "times-tables", "geometry", "plots"]
    for _ in range(100):
        tags = set(rng.sample(vocab, rng.randint(1, 4)))
        ctx = set(rng.sample(vocab, rng.randint(1, 5)))
        node = KnowledgeNode(node_id="n", topic_tags=tags, description="", mastery=0.5)
        fallback = KnowledgeNode(node_id="zz-general", topic_tags={"general"}, description="", mastery=0.5)
        profile = make_profile(nodes=[node, fallback])
        expected = _brute_force_score(tags, ctx)
        hits = query_nodes(profile, ctx, k=2)
        got = next((h.score for h in hits if h.node_id == "n"), 0.0)
        assert got == pytest.approx(expected), (tags, ctx)


def test_adding_matching_ctx_tag_never_lowers_scores():
    rng = random.Random(77)
    vocab = ["alpha", "beta-1", "gamma", "alpha-prime", "delta", "beta"]
    for _ in range(50):
        tags = set(rng.sample(vocab, rng.randint(1, 3)))
        ctx = set(rng.sample(vocab, rng.randint(1, 3)))
        node = KnowledgeNode(node_id="n", topic_tags=tags, description="", mastery=0.5)
        profile = make_profile(
            nodes=[node, KnowledgeNode(node_id="g", topic_tags={"general"}, description="", mastery=0.5)]
        )
        base = _score_of(profile, ctx)
        extra = rng.choice(sorted(tags))
        widened = _score_of(profile, ctx | {extra})
        assert widened >= base


def _score_of(profile, ctx) -> float:
    hits = query_nodes(profile, ctx, k=4)
    return next((h.score for h in hits if h.node_id == "n"), 0.0)


# ── roster files ────────────────────────────────────────────────────


def test_demo_roster_loads_and_roundtrips(demo_roster):
    assert demo_roster.roster_id == "demo-classroom"
    assert [s.student_id for s in demo_roster.students] == ["devin", "maya", "jordan"]
    doc = roster_to_json(demo_roster)
    again = parse_roster(doc)
    assert again == demo_roster


def test_loader_rejects_unknown_fields(demo_roster):
    doc = roster_to_json(demo_roster)
    doc["students"][0]["favorite_color"] = "blue"
    with pytest.raises(RosterSchemaError):
        parse_roster(doc)


def test_loader_rejects_missing_schema_version(demo_roster):
    doc = roster_to_json(demo_roster)
    del doc["schema_version"]
    with pytest.raises(RosterSchemaError):
        parse_roster(doc)


def test_loader_rejects_wrong_schema_version(demo_roster):
    doc = roster_to_json(demo_roster)
    doc["schema_version"] = 99
    with pytest.raises(RosterSchemaError):
        parse_roster(doc)


def test_loader_rejects_missing_emotion_channels(demo_roster):
    doc = roster_to_json(demo_roster)
    del doc["students"][0]["affective"]["joy"]
    with pytest.raises(RosterSchemaError):
        parse_roster(doc)


def test_empty_file_is_schema_mismatch(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    with pytest.raises(RosterSchemaError):
        load_roster(path)


def test_missing_file_is_io_error(tmp_path):
    with pytest.raises(OSError):
        load_roster(tmp_path / "nope.json")


def test_invalid_profile_surfaces_validation_report(demo_roster, tmp_path):
    doc = roster_to_json(demo_roster)
    doc["students"][0]["cognitive"][0]["mastery"] = 2.0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(RosterValidationError) as err:
        load_roster(path)
    issues = err.value.report.issues
    assert any(i.code == "OUT_OF_RANGE" and "mastery" in i.path for i in issues)


def test_duplicate_student_ids_rejected(demo_roster):
    doc = roster_to_json(demo_roster)
    doc["students"].append(doc["students"][0])
    with pytest.raises(RosterValidationError) as err:
        parse_roster(doc)
    assert any(i.code == "DUPLICATE_ID" for i in err.value.report.issues)
