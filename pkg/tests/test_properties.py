"""Cross-module properties: decoded plans viewed through the interval-logic
layer, grounding with actor restrictions, and round trips under random data."""

from __future__ import annotations

import random

from randgen import random_small_model, random_tiny_domain
from tqaplan.domain import parse_domain, serialize_domain
from tqaplan.cpmodel import export_model, parse_model
from tqaplan.encoder import encode
from tqaplan.intervals import History, Interval, Tqa, check_tqa
from tqaplan.search import SearchLimits, find_plan
from tqaplan.solver import SolverConfig, solve
from tqaplan.theory import ground_actions, instantiate
from tqaplan.validator import validate_plan


def test_valid_plan_history_is_homogeneous():
    domain = parse_domain(
        '{"fluents": ["g"],'
        ' "skills": [{"name": "a", "kind": "delay", "duration": 4, "raises": ["g"]}],'
        ' "goal": ["g"]}'
    )
    outcome = find_plan(domain, limits=SearchLimits(max_n=3))
    assert outcome.found
    diagram = outcome.diagram
    total = diagram.boundaries[-1]
    history = History.from_true_segments(total, {"g": diagram.true_segments("g")})
    for segment in diagram.fluents["g"]:
        iv = segment.interval
        if iv.size > 8:
            continue
        assert check_tqa(history, Tqa("g", segment.truth, iv))
        for left in range(iv.left, iv.right):
            for right in range(left + 1, iv.right + 1):
                assert check_tqa(history, Tqa("g", segment.truth, Interval(left, right)))


def test_interfering_fluents_never_cotemporal_in_found_plans():
    domain = parse_domain(
        '{"fluents": ["p", "q"],'
        ' "skills": ['
        '  {"name": "mk_p", "kind": "delay", "duration": 2, "raises": ["p"]},'
        '  {"name": "mk_q", "kind": "delay", "duration": 2, "raises": ["q"]}],'
        ' "interference": [["p", "q"]],'
        ' "init": ["p"], "goal": ["q"]}'
    )
    outcome = find_plan(domain, limits=SearchLimits(max_n=4))
    assert outcome.found
    p_true = outcome.diagram.true_segments("p")
    q_true = outcome.diagram.true_segments("q")
    for a in p_true:
        for b in q_true:
            assert a.right <= b.left or b.right <= a.left
    assert validate_plan(domain, outcome.plan).is_valid


def test_actor_restricted_skills_ground_and_validate():
    domain = parse_domain(
        '{"fluents": ["g"],'
        ' "actors": 2,'
        ' "skills": [{"name": "a", "kind": "delay", "duration": 2, "raises": ["g"],'
        '             "actors": [2]}],'
        ' "goal": ["g"]}'
    )
    refs = ground_actions(domain)
    assert [(r.name, r.actor) for r in refs] == [("a", 2)]
    outcome = find_plan(domain, limits=SearchLimits(max_n=2))
    assert outcome.found
    (key,) = outcome.plan.action_entries
    assert key.actor == 2
    assert validate_plan(domain, outcome.plan).is_valid


def test_domain_round_trip_randomized():
    rng = random.Random(2718)
    for _ in range(60):
        domain = random_tiny_domain(rng)
        assert parse_domain(serialize_domain(domain)) == domain


def test_model_text_round_trip_preserves_solving():
    rng = random.Random(3141)
    for _ in range(40):
        model = random_small_model(rng)
        again = parse_model(export_model(model))
        assert again == model
        a = solve(model, SolverConfig(time_budget=20))
        b = solve(again, SolverConfig(time_budget=20))
        assert (a.status, a.objective, a.nodes) == (b.status, b.objective, b.nodes)


def test_encoded_model_survives_its_text_form():
    domain = parse_domain(
        '{"fluents": ["g"],'
        ' "skills": [{"name": "a", "kind": "delay", "duration": 2, "raises": ["g"]}],'
        ' "goal": ["g"]}'
    )
    model = encode(instantiate(domain, 2), "makespan")
    text = export_model(model)
    again = parse_model(text)
    assert again == model
    assert export_model(again) == text
    first = solve(model, SolverConfig(time_budget=30))
    second = solve(again, SolverConfig(time_budget=30))
    assert first.is_sat and second.is_sat
    assert first.objective == second.objective
