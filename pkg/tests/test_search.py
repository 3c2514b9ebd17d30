"""Stage-count search, decoding, diagrams, and the plan document format."""

from __future__ import annotations

from fractions import Fraction

import pytest

from tqaplan.domain import parse_domain
from tqaplan.encoder import encode
from tqaplan.intervals import Interval
from tqaplan.search import (
    ActionKey,
    PlanFormatError,
    SearchLimits,
    decode,
    diagram_from_plan,
    find_plan,
    plan_from_document,
    plan_to_document,
)
from tqaplan.solver import SolverConfig, solve
from tqaplan.theory import instantiate
from tqaplan.validator import enumerate_models, validate_plan

TINY = parse_domain(
    '{"fluents": ["g"],'
    ' "skills": [{"name": "a", "kind": "delay", "duration": 2, "raises": ["g"], "cost": 3}],'
    ' "goal": ["g"]}'
)
NO_RAISER = parse_domain(
    '{"fluents": ["g"], "skills": [{"name": "a", "kind": "delay", "duration": 2}], "goal": ["g"]}'
)


def test_find_plan_minimal_domain():
    outcome = find_plan(TINY, limits=SearchLimits(max_n=3))
    assert outcome.found and outcome.n_found == 1
    assert outcome.plan.action_entries[ActionKey("a", 1, 1)] == (0, 2)
    report = validate_plan(TINY, outcome.plan)
    assert report.is_valid
    # oracle confirms the stage count is minimal (nothing below 1 to probe)
    assert enumerate_models(TINY, 1).is_sat


def test_find_plan_exhausts_on_unreachable_goal():
    outcome = find_plan(NO_RAISER, limits=SearchLimits(max_n=3))
    assert outcome.status == "exhausted"
    assert outcome.plan is None


def test_geometric_mode_flags_non_minimality():
    outcome = find_plan(TINY, limits=SearchLimits(max_n=4), geometric=True)
    assert outcome.found
    assert outcome.minimal_n_guaranteed is False


def test_resource_limit_outcome():
    outcome = find_plan(
        TINY,
        limits=SearchLimits(max_n=3, time_budget=60),
        cfg=SolverConfig(node_budget=1),
    )
    assert outcome.status in ("found", "limit")  # propagation may settle it without nodes


def test_objective_values_descaled():
    outcome = find_plan(TINY, objective="costs", limits=SearchLimits(max_n=2))
    assert outcome.found and outcome.plan.objective == Fraction(3)
    outcome2 = find_plan(TINY, objective="makespan", limits=SearchLimits(max_n=2))
    assert outcome2.found and outcome2.plan.objective == Fraction(2)


def test_decode_constant_and_transition_segments():
    domain = parse_domain(
        '{"fluents": ["g", "idle"],'
        ' "skills": [{"name": "a", "kind": "delay", "duration": 2, "raises": ["g"]}],'
        ' "goal": ["g"]}'
    )
    shape = instantiate(domain, 2, 1, 4)
    res = solve(encode(shape), SolverConfig(time_budget=30))
    assert res.is_sat
    plan, diagram = decode(shape, res.assignment)
    total = plan.boundaries[-1]
    idle_segments = diagram.fluents["idle"]
    assert len(idle_segments) == 1
    assert idle_segments[0].truth is False
    assert idle_segments[0].interval == Interval(0, total)
    g_segments = diagram.fluents["g"]
    assert [s.truth for s in g_segments] == [False, True]
    assert g_segments[0].interval.right == g_segments[1].interval.left
    # diagram covers the plan span with meeting segments for every fluent
    for segs in diagram.fluents.values():
        assert segs[0].interval.left == 0
        assert segs[-1].interval.right == total
        for a, b in zip(segs, segs[1:]):
            assert a.interval.right == b.interval.left
            assert a.truth != b.truth


def test_diagram_reconstruction_idempotent():
    outcome = find_plan(TINY, limits=SearchLimits(max_n=2))
    rebuilt = diagram_from_plan(outcome.plan)
    assert rebuilt.fluents == outcome.diagram.fluents
    assert rebuilt.actions == outcome.diagram.actions
    assert rebuilt.boundaries == outcome.diagram.boundaries


def test_plan_document_round_trip():
    outcome = find_plan(TINY, objective="costs", limits=SearchLimits(max_n=2))
    text = plan_to_document(outcome.plan)
    again = plan_from_document(text)
    assert again.boundaries == outcome.plan.boundaries
    assert again.n_used == outcome.plan.n_used
    assert again.objective == outcome.plan.objective
    assert again.action_entries == outcome.plan.action_entries
    assert again.fluent_entries == outcome.plan.fluent_entries
    assert plan_to_document(again) == text


def test_plan_document_rejections():
    with pytest.raises(PlanFormatError):
        plan_from_document("")
    with pytest.raises(PlanFormatError):
        plan_from_document("{}")
    with pytest.raises(PlanFormatError):
        plan_from_document('{"n": 1, "boundaries": [0, 2], "surprise": 1}')
    # a fluent flipping twice inside one stage has no two-part TQA form
    doc = (
        '{"n": 1, "boundaries": [0, 4], "fluents": {"p": ['
        '{"truth": false, "start": 0, "end": 1},'
        '{"truth": true, "start": 1, "end": 2},'
        '{"truth": false, "start": 2, "end": 4}]}, "actions": []}'
    )
    with pytest.raises(PlanFormatError):
        plan_from_document(doc)


def test_invalid_max_n():
    with pytest.raises(ValueError):
        find_plan(TINY, limits=SearchLimits(max_n=0))
