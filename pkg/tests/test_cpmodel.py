"""Constraint-model IR and the canonical text form."""

from __future__ import annotations

import pytest

from tqaplan.cpmodel import (
    BOOL,
    EQ,
    GE,
    INT,
    LE,
    Clause,
    Cmp,
    CspModel,
    ExactlyOne,
    IffConj,
    Implies,
    Lin,
    Lit,
    ModelFormatError,
    Term,
    export_model,
    parse_model,
)


def sample_model() -> CspModel:
    m = CspModel()
    b0 = m.new_bool("use[a]")
    b1 = m.new_bool("flag")
    x = m.new_int("x", 0, 7)
    y = m.new_int("y", -2, 4)
    m.add(Clause((Lit(b0), Lit(b1, False))))
    m.add(Lin((Term(2, INT, x), Term(-1, INT, y), Term(1, BOOL, b1)), LE, 9))
    m.add(Lin((Term(1, INT, x), Term(1, INT, y)), EQ, 3))
    m.add(Implies((Lit(b0), Cmp(x, EQ, 2)), Lin((Term(1, INT, y),), LE, 1)))
    m.add(Implies((Cmp(y, GE, 0),), Clause((Lit(b1),))))
    m.add(IffConj(Lit(b1), (Lit(b0), Cmp(x, LE, 5))))
    m.add(ExactlyOne((Lit(b0), Lit(b1))))
    m.minimize((Term(1, INT, x), Term(3, BOOL, b0)))
    return m


def test_round_trip_and_determinism():
    m = sample_model()
    text = export_model(m)
    again = parse_model(text)
    assert again == m
    assert export_model(again) == text
    assert export_model(sample_model()) == text


def test_empty_model_exports_header_only():
    assert export_model(CspModel()) == "cspmodel 1\n"
    assert parse_model("cspmodel 1\n") == CspModel()


def test_rejects_bad_documents():
    with pytest.raises(ModelFormatError):
        parse_model("not a model")
    with pytest.raises(ModelFormatError):
        parse_model("cspmodel 1\nfrobnicate 3\n")
    with pytest.raises(ModelFormatError):
        parse_model("cspmodel 1\nclause 1 +q3\n")


def test_well_formedness_checks():
    m = CspModel()
    m.new_bool("b")
    m.add(Clause((Lit(7),)))
    with pytest.raises(ModelFormatError):
        m.check_well_formed()
    with pytest.raises(ValueError):
        CspModel().new_int("x", 3, 1)
    with pytest.raises(ValueError):
        CspModel().new_bool("has space")
