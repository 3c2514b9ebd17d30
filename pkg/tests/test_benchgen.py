"""Benchmark generation: structure counts, feasibility, and determinism."""

from __future__ import annotations

import pytest

from tqaplan.benchgen import BASE_DURATIONS, GadgetSpec, gen_cushing, level_durations
from tqaplan.domain import (
    ConstraintRel,
    FluentRole,
    serialize_domain,
    validate_domain,
)


def test_spec_validation():
    with pytest.raises(ValueError):
        GadgetSpec("IV", 1)
    with pytest.raises(ValueError):
        GadgetSpec("I", 0)
    with pytest.raises(ValueError):
        GadgetSpec("I", 1, height=2)
    with pytest.raises(ValueError):
        GadgetSpec("II", 1)
    with pytest.raises(ValueError):
        GadgetSpec("II", 1, height=9)


def test_type_one_counts():
    for m in (1, 3, 5):
        d = gen_cushing(GadgetSpec("I", m))
        assert len(d.skills) == 3 * m
        resources = [f for f in d.fluents if f.role is FluentRole.RESOURCE]
        assert len(resources) == 2 * m
        goals = [f for f in d.fluents if f.name.startswith("goal_")]
        assert len(goals) == m and d.goal == frozenset(f.name for f in goals)
        assert validate_domain(d) == []


def test_type_one_structure():
    d = gen_cushing(GadgetSpec("I", 1))
    skills = d.skill_map()
    a1, a2, a3 = skills["a1_g1"], skills["a2_g1"], skills["a3_g1"]
    assert {(c.fluent, c.rel) for c in a1.constraints} == {("w1_g1", ConstraintRel.EQUALS)}
    assert {(c.fluent, c.rel) for c in a2.constraints} == {
        ("w2_g1", ConstraintRel.EQUALS),
        ("w1_g1", ConstraintRel.OVERLAPS),
    }
    assert {(c.fluent, c.rel) for c in a3.constraints} == {
        ("w1_g1", ConstraintRel.CONTAINS),
        ("w2_g1", ConstraintRel.CONTAINS),
    }
    assert a3.raises == frozenset({"goal_g1"})
    assert (a1.duration, a2.duration, a3.duration) == BASE_DURATIONS


def test_type_two_links_levels():
    d = gen_cushing(GadgetSpec("II", 1, height=2))
    skills = d.skill_map()
    top_a3 = skills["a3_s1l1"]
    assert ("link_s1l1", ConstraintRel.EQUALS) in {
        (c.fluent, c.rel) for c in top_a3.constraints
    }
    next_a1 = skills["a1_s1l2"]
    assert ("link_s1l1", ConstraintRel.CONTAINS) in {
        (c.fluent, c.rel) for c in next_a1.constraints
    }
    # outer levels get wider durations
    assert skills["a1_s1l1"].duration > skills["a1_s1l2"].duration
    assert validate_domain(d) == []


def test_type_three_sequencing_fluents():
    d = gen_cushing(GadgetSpec("III", 3, height=2))
    skills = d.skill_map()
    assert "seq_1" in d.fluent_map() and "seq_2" in d.fluent_map()
    assert "seq_1" in skills["a1_s1l1"].raises
    assert ("seq_1", ConstraintRel.CONTAINS) in {
        (c.fluent, c.rel) for c in skills["a1_s2l1"].constraints
    }
    assert ("seq_2", ConstraintRel.CONTAINS) in {
        (c.fluent, c.rel) for c in skills["a1_s3l1"].constraints
    }
    assert validate_domain(d) == []


def test_level_durations_monotone():
    inner = level_durations(0)
    outer = level_durations(2)
    assert all(o > i for o, i in zip(outer, inner))


def test_generation_deterministic():
    a = serialize_domain(gen_cushing(GadgetSpec("III", 2, height=3)))
    b = serialize_domain(gen_cushing(GadgetSpec("III", 2, height=3)))
    assert a == b
